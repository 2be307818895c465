//! Closed-form predictions for `det(A_u(R) - λI)` over finite local rings.
//!
//! Predictors take numeric parameters only. [`classify_case`] is the one
//! bridge from a ring and an element to a branch and its parameters.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::charpoly::charpoly_berkowitz;
use crate::error::{Error, Result};
use crate::local::{is_local, LocalProfile, Stratum};
use crate::poly::{FactoredPoly, IntPoly};
use crate::ring::{ElementId, FiniteRing};

/// Why no closed form applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unsupported {
    NotLocal,
    /// The branch needs `J^{n-1} ≠ 0`.
    NotMaximalNilpotent,
    /// Even `q` with a characteristic other than `2` or `2^n`, `n ≥ 3`.
    EvenUnitCharacteristic,
    /// `u ∈ J^k \ J^{k+1}` with `k` and `q` both even.
    StratumEvenKEvenQ,
    /// The element is outside the theorem's scope (e.g. a unit for a radical branch).
    OutsideTheorem,
}

impl Unsupported {
    pub fn as_str(self) -> &'static str {
        match self {
            Unsupported::NotLocal => "not_local",
            Unsupported::NotMaximalNilpotent => "not_maximal_nilpotent",
            Unsupported::EvenUnitCharacteristic => "even_unit_characteristic",
            Unsupported::StratumEvenKEvenQ => "stratum_even_k_even_q",
            Unsupported::OutsideTheorem => "outside_theorem",
        }
    }
}

impl fmt::Display for Unsupported {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One branch per printed case, or the reason none applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    U0MaxNil,
    UnitOddSq,
    UnitOddNonsq,
    UnitEvenChar2,
    UnitEvenChar2nSq,
    UnitEvenChar2nNonsq,
    StratumKOdd,
    StratumKEvenSq,
    StratumKEvenNonsq,
    J2ZeroU0,
    J2ZeroUnitSqEven,
    J2ZeroUnitNonsqEven,
    J2ZeroUnitSqOdd,
    J2ZeroUnitNonsqOdd,
    J2ZeroRadical,
    Unsupported(Unsupported),
}

impl CaseTag {
    pub const SUPPORTED: [CaseTag; 15] = [
        CaseTag::U0MaxNil,
        CaseTag::UnitOddSq,
        CaseTag::UnitOddNonsq,
        CaseTag::UnitEvenChar2,
        CaseTag::UnitEvenChar2nSq,
        CaseTag::UnitEvenChar2nNonsq,
        CaseTag::StratumKOdd,
        CaseTag::StratumKEvenSq,
        CaseTag::StratumKEvenNonsq,
        CaseTag::J2ZeroU0,
        CaseTag::J2ZeroUnitSqEven,
        CaseTag::J2ZeroUnitNonsqEven,
        CaseTag::J2ZeroUnitSqOdd,
        CaseTag::J2ZeroUnitNonsqOdd,
        CaseTag::J2ZeroRadical,
    ];

    /// Stable upper-case name; every unsupported reason maps to `UNSUPPORTED`.
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::U0MaxNil => "U0_MAXNIL",
            CaseTag::UnitOddSq => "UNIT_ODD_SQ",
            CaseTag::UnitOddNonsq => "UNIT_ODD_NONSQ",
            CaseTag::UnitEvenChar2 => "UNIT_EVEN_CHAR2",
            CaseTag::UnitEvenChar2nSq => "UNIT_EVEN_CHAR2N_SQ",
            CaseTag::UnitEvenChar2nNonsq => "UNIT_EVEN_CHAR2N_NONSQ",
            CaseTag::StratumKOdd => "STRATUM_K_ODD",
            CaseTag::StratumKEvenSq => "STRATUM_K_EVEN_SQ",
            CaseTag::StratumKEvenNonsq => "STRATUM_K_EVEN_NONSQ",
            CaseTag::J2ZeroU0 => "J2_ZERO_U0",
            CaseTag::J2ZeroUnitSqEven => "J2_ZERO_UNIT_SQ_EVEN",
            CaseTag::J2ZeroUnitNonsqEven => "J2_ZERO_UNIT_NONSQ_EVEN",
            CaseTag::J2ZeroUnitSqOdd => "J2_ZERO_UNIT_SQ_ODD",
            CaseTag::J2ZeroUnitNonsqOdd => "J2_ZERO_UNIT_NONSQ_ODD",
            CaseTag::J2ZeroRadical => "J2_ZERO_RADICAL",
            CaseTag::Unsupported(_) => "UNSUPPORTED",
        }
    }

    pub fn is_supported(self) -> bool {
        !matches!(self, CaseTag::Unsupported(_))
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::Unsupported(r) => write!(f, "UNSUPPORTED({r})"),
            t => f.write_str(t.as_str()),
        }
    }
}

/// Theorems whose hypotheses [`classify_under`] checks in isolation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    OddUnit,
    ZeroMaxNil,
    EvenUnit,
    Stratum,
    J2Zero,
}

/// A branch together with the parameters its predictor needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub tag: CaseTag,
    /// `0` when the ring is not local.
    pub q: u64,
    pub n: u32,
    /// Radical depth of `u`; `None` for units.
    pub k: Option<usize>,
    pub characteristic: u64,
    pub is_square: bool,
    /// Odd-`k` strata with even `q`: the formula is applied but the proof never
    /// covers even residue characteristic explicitly.
    pub scrutiny: bool,
}

impl Classification {
    /// `None` for unsupported tags.
    pub fn predict(&self) -> Result<Option<FactoredPoly>> {
        let (q, n) = (self.q, self.n);
        let sq = self.is_square;
        let p = match self.tag {
            CaseTag::Unsupported(_) => return Ok(None),
            CaseTag::U0MaxNil => zero_maxnil_factored(q, n)?,
            CaseTag::UnitOddSq | CaseTag::UnitOddNonsq => predict_unit_odd(q, n, sq)?,
            CaseTag::UnitEvenChar2 | CaseTag::UnitEvenChar2nSq | CaseTag::UnitEvenChar2nNonsq => {
                predict_unit_even_maxnil(q, n, self.characteristic, sq)?
            }
            CaseTag::StratumKOdd | CaseTag::StratumKEvenSq | CaseTag::StratumKEvenNonsq => {
                let k = self.k.ok_or_else(|| Error::Internal("stratum tag without depth".into()))?;
                predict_stratum(q, n, k, sq)?
            }
            CaseTag::J2ZeroU0 => predict_j2zero(q, n, J2Case::Zero)?,
            CaseTag::J2ZeroRadical => predict_j2zero(q, n, J2Case::Radical)?,
            CaseTag::J2ZeroUnitSqEven | CaseTag::J2ZeroUnitSqOdd => predict_j2zero(q, n, J2Case::UnitSquare)?,
            CaseTag::J2ZeroUnitNonsqEven | CaseTag::J2ZeroUnitNonsqOdd => predict_j2zero(q, n, J2Case::UnitNonsquare)?,
        };
        Ok(Some(p))
    }
}

fn check_element(ring: &FiniteRing, u: ElementId) -> Result<()> {
    if u.index() >= ring.order() {
        return Err(Error::IndexOutOfRange { index: u.index(), order: ring.order() });
    }
    Ok(())
}

/// `char = 2^n` with `n ≥ 3`, where `|R| = q^n`.
fn is_char_two_pow_n(profile: &LocalProfile) -> bool {
    profile.n >= 3 && 1u64.checked_shl(profile.n).is_some_and(|c| c == profile.characteristic)
}

fn even_unit_tag(ring: &FiniteRing, u: ElementId, profile: &LocalProfile) -> CaseTag {
    if !profile.is_maximal() {
        CaseTag::Unsupported(Unsupported::NotMaximalNilpotent)
    } else if profile.characteristic == 2 {
        CaseTag::UnitEvenChar2
    } else if is_char_two_pow_n(profile) {
        if ring.is_unit_square(u) {
            CaseTag::UnitEvenChar2nSq
        } else {
            CaseTag::UnitEvenChar2nNonsq
        }
    } else {
        CaseTag::Unsupported(Unsupported::EvenUnitCharacteristic)
    }
}

fn stratum_tag(ring: &FiniteRing, u: ElementId, profile: &LocalProfile, k: usize) -> CaseTag {
    if !profile.is_maximal() {
        CaseTag::Unsupported(Unsupported::NotMaximalNilpotent)
    } else if k % 2 == 1 {
        CaseTag::StratumKOdd
    } else if profile.q % 2 == 0 {
        CaseTag::Unsupported(Unsupported::StratumEvenKEvenQ)
    } else if ring.is_square(u) {
        CaseTag::StratumKEvenSq
    } else {
        CaseTag::StratumKEvenNonsq
    }
}

fn j2_tag(ring: &FiniteRing, u: ElementId, profile: &LocalProfile) -> CaseTag {
    let even = profile.q % 2 == 0;
    match profile.stratum_of(u) {
        // A square of a non-unit lies in J, so for a unit u "u = s² with s a
        // unit" and "u = s² for some s" coincide.
        Stratum::Unit => match (ring.is_unit_square(u), even) {
            (true, true) => CaseTag::J2ZeroUnitSqEven,
            (false, true) => CaseTag::J2ZeroUnitNonsqEven,
            (true, false) => CaseTag::J2ZeroUnitSqOdd,
            (false, false) => CaseTag::J2ZeroUnitNonsqOdd,
        },
        _ if u == ring.zero() => CaseTag::J2ZeroU0,
        _ => CaseTag::J2ZeroRadical,
    }
}

/// The branch for `(R, u)`, trying the `J² = 0` theorem first.
pub fn classify_case(ring: &FiniteRing, u: ElementId, profile: &LocalProfile) -> Result<CaseTag> {
    check_element(ring, u)?;
    if profile.radical_squares_to_zero() {
        return Ok(j2_tag(ring, u, profile));
    }
    Ok(match profile.stratum_of(u) {
        Stratum::Unit if profile.q % 2 == 1 => {
            if ring.is_unit_square(u) {
                CaseTag::UnitOddSq
            } else {
                CaseTag::UnitOddNonsq
            }
        }
        Stratum::Unit => even_unit_tag(ring, u, profile),
        _ if u == ring.zero() => {
            if profile.is_maximal() {
                CaseTag::U0MaxNil
            } else {
                CaseTag::Unsupported(Unsupported::NotMaximalNilpotent)
            }
        }
        Stratum::Radical(k) => stratum_tag(ring, u, profile, k),
    })
}

/// The branch of one theorem only, regardless of which theorem [`classify_case`] prefers.
pub fn classify_under(ring: &FiniteRing, u: ElementId, profile: &LocalProfile, theorem: Theorem) -> Result<CaseTag> {
    check_element(ring, u)?;
    let outside = CaseTag::Unsupported(Unsupported::OutsideTheorem);
    let stratum = profile.stratum_of(u);
    let is_zero = u == ring.zero();
    Ok(match theorem {
        Theorem::OddUnit => match stratum {
            Stratum::Unit if profile.q % 2 == 1 => {
                if ring.is_unit_square(u) {
                    CaseTag::UnitOddSq
                } else {
                    CaseTag::UnitOddNonsq
                }
            }
            _ => outside,
        },
        Theorem::EvenUnit => match stratum {
            Stratum::Unit if profile.q % 2 == 0 => even_unit_tag(ring, u, profile),
            _ => outside,
        },
        Theorem::ZeroMaxNil if is_zero => {
            if profile.is_maximal() {
                CaseTag::U0MaxNil
            } else {
                CaseTag::Unsupported(Unsupported::NotMaximalNilpotent)
            }
        }
        Theorem::ZeroMaxNil => outside,
        Theorem::Stratum => match stratum {
            Stratum::Radical(k) if !is_zero => stratum_tag(ring, u, profile, k),
            _ => outside,
        },
        Theorem::J2Zero if profile.radical_squares_to_zero() => j2_tag(ring, u, profile),
        Theorem::J2Zero => CaseTag::Unsupported(Unsupported::NotMaximalNilpotent),
    })
}

/// Classifies `(R, u)`; a non-local ring yields `UNSUPPORTED(not_local)`.
pub fn classify(ring: &FiniteRing, u: ElementId) -> Result<Classification> {
    check_element(ring, u)?;
    if !is_local(ring) {
        return Ok(Classification {
            tag: CaseTag::Unsupported(Unsupported::NotLocal),
            q: 0,
            n: 0,
            k: None,
            characteristic: ring.characteristic() as u64,
            is_square: ring.is_square(u),
            scrutiny: false,
        });
    }
    classify_with(ring, u, &LocalProfile::compute(ring)?)
}

/// [`classify`] with a precomputed profile.
pub fn classify_with(ring: &FiniteRing, u: ElementId, profile: &LocalProfile) -> Result<Classification> {
    let tag = classify_case(ring, u, profile)?;
    let k = match profile.stratum_of(u) {
        Stratum::Unit => None,
        Stratum::Radical(k) => Some(k),
    };
    Ok(Classification {
        tag,
        q: profile.q,
        n: profile.n,
        k,
        characteristic: profile.characteristic,
        is_square: ring.is_square(u),
        scrutiny: tag == CaseTag::StratumKOdd && profile.q % 2 == 0,
    })
}

fn hyp(msg: &str) -> Error {
    Error::Hypothesis(String::from(msg))
}

fn check_qn(q: u64, n: u32) -> Result<u64> {
    if q < 2 || n == 0 {
        return Err(hyp("need q ≥ 2 and n ≥ 1"));
    }
    q.checked_pow(n).ok_or_else(|| hyp("q^n overflows"))
}

fn lin(c: i64) -> IntPoly {
    IntPoly::linear(c)
}

/// `λ² - c`.
fn lambda_sq_minus(c: u64) -> IntPoly {
    IntPoly::from_i64s(&[-(c as i64), 0, 1])
}

/// Units, odd `q`, any local ring.
pub fn predict_unit_odd(q: u64, n: u32, is_square: bool) -> Result<FactoredPoly> {
    let qn = check_qn(q, n)?;
    if q % 2 == 0 {
        return Err(hyp("odd-unit formula needs odd q"));
    }
    let zeros = qn / q;
    let units = qn - zeros;
    let (plus, minus) = if is_square { ((units + 2) / 2, (units - 2) / 2) } else { (units / 2, units / 2) };
    Ok(FactoredPoly::new(-1).with_lambda(zeros).with(lin(-1), plus).with(lin(1), minus))
}

/// `B′` with its rows in reverse order, so that `det(B′ - λ·antidiag) = ±det(rev(B′) - λI)`.
fn zero_maxnil_reversed(q: u64, n: u32) -> Vec<Vec<BigInt>> {
    let m = n as usize + 1;
    let alpha = |i: u32| BigInt::from(q.pow(i) - q.pow(i - 1));
    let mut rows: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| match i {
                    0 => BigInt::from(1),
                    _ if j >= i => alpha(i as u32),
                    _ => BigInt::from(0),
                })
                .collect()
        })
        .collect();
    rows.reverse();
    rows
}

/// `det(M - λ·antidiag(1, …, 1))` for an `m×m` integer matrix given with its rows reversed.
fn antidiag_det(reversed: &[Vec<BigInt>]) -> IntPoly {
    let m = reversed.len();
    // antidiag(1) is the reversal permutation, of sign (-1)^{m(m-1)/2}
    let p = IntPoly::new(charpoly_berkowitz(reversed));
    if (m * (m.saturating_sub(1)) / 2) % 2 == 1 {
        -p
    } else {
        p
    }
}

fn parity_sign(e: i64) -> BigInt {
    BigInt::from(if e.rem_euclid(2) == 0 { 1 } else { -1 })
}

fn zero_maxnil_factored(q: u64, n: u32) -> Result<FactoredPoly> {
    let qn = check_qn(q, n)?;
    let det = antidiag_det(&zero_maxnil_reversed(q, n));
    let nn = n as i64;
    let sign = parity_sign(q as i64 - (nn + 1) * (nn + 2) / 2);
    // at n = 1 with q = 2 the determinant keeps a root at 0
    let v = det.lambda_valuation().unwrap_or(0);
    let core = IntPoly::new(det.coeffs()[v..].to_vec());
    let lead = core.leading();
    Ok(FactoredPoly::new(sign * &lead).with_lambda(qn - n as u64 - 1 + v as u64).with(core.scale(&lead), 1))
}

/// `u = 0`, maximal nilpotency.
pub fn predict_zero_maxnil(q: u64, n: u32) -> Result<IntPoly> {
    Ok(zero_maxnil_factored(q, n)?.expand())
}

/// Characteristic polynomial of the zero-divisor graph with loops, i.e. the
/// principal submatrix of `A_0(R)` on the nonzero non-units.
pub fn predict_adjacency_loops(q: u64, n: u32) -> Result<IntPoly> {
    let qn = check_qn(q, n)?;
    if n < 2 {
        return Err(hyp("no nonzero zero divisors when n < 2"));
    }
    let m = n as usize - 1;
    let alpha = |i: usize| BigInt::from(q.pow(i as u32) - q.pow(i as u32 - 1));
    let mut rows: Vec<Vec<BigInt>> =
        (0..m).map(|i| (0..m).map(|j| if j >= i { alpha(i + 1) } else { BigInt::from(0) }).collect()).collect();
    rows.reverse();
    let det = antidiag_det(&rows);
    let nn = n as i64;
    let sign = parity_sign(q as i64 - 1 - nn * (nn - 1) / 2);
    Ok(det.shift((qn / q) as usize - n as usize).scale(&sign))
}

/// Units, even `q`, maximal nilpotency; characteristic `2` or `2^n` with `n ≥ 3`.
pub fn predict_unit_even_maxnil(q: u64, n: u32, characteristic: u64, is_square: bool) -> Result<FactoredPoly> {
    let qn = check_qn(q, n)?;
    if q % 2 == 1 {
        return Err(hyp("even-unit formula needs even q"));
    }
    let zeros = qn / q;
    let units = qn - zeros;
    if characteristic == 2 {
        return Ok(FactoredPoly::new(1).with_lambda(zeros).with(lin(1), units));
    }
    if n < 3 || 1u64.checked_shl(n) != Some(characteristic) {
        return Err(Error::Unsupported(String::from("even-unit formula needs characteristic 2 or 2^n with n ≥ 3")));
    }
    let (plus, minus) = if is_square { ((units + 4) / 2, (units - 4) / 2) } else { (units / 2, units / 2) };
    Ok(FactoredPoly::new(1).with_lambda(zeros).with(lin(-1), plus).with(lin(1), minus))
}

/// `u ∈ J^k \ J^{k+1}`, maximal nilpotency, `0 ≤ k < n`.
pub fn predict_stratum(q: u64, n: u32, k: usize, is_square: bool) -> Result<FactoredPoly> {
    check_qn(q, n)?;
    if k >= n as usize {
        return Err(hyp("stratum depth must be below n"));
    }
    let k32 = k as u32;
    let outer = q.pow(n - k32 - 1);
    let zeros = outer * (q.pow(k32 + 1) - (k as u64 + 1) * (q - 1));
    let pairs = outer * (q - 1) * (k as u64 + 1) / 2;
    let qk = q.pow(k32);
    if k % 2 == 1 {
        let sign = if q % 2 == 0 { 1 } else { -1 };
        return Ok(FactoredPoly::new(sign).with_lambda(zeros).with(lambda_sq_minus(qk), pairs));
    }
    if q % 2 == 0 {
        return Err(Error::Unsupported(String::from("stratum formula needs odd q when k is even")));
    }
    let base = FactoredPoly::new(-1).with_lambda(zeros);
    Ok(if is_square {
        base.with(lambda_sq_minus(qk), pairs - 1).with(lin(-(q.pow(k32 / 2) as i64)), 2)
    } else {
        base.with(lambda_sq_minus(qk), pairs)
    })
}

/// Branches of the `J² = 0` theorem; the parity of `q` is read off `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum J2Case {
    Zero,
    UnitSquare,
    UnitNonsquare,
    /// `0 ≠ u ∈ J`.
    Radical,
}

/// `J² = 0`.
pub fn predict_j2zero(q: u64, n: u32, case: J2Case) -> Result<FactoredPoly> {
    let qn = check_qn(q, n)?;
    let zeros = qn / q;
    let units = qn - zeros;
    let sign_q = if q % 2 == 0 { 1 } else { -1 };
    Ok(match case {
        J2Case::Zero => {
            let (a, b) = (BigInt::from(zeros), BigInt::from(qn));
            let c0 = &a * BigInt::from(q - 1) * (&a - 1);
            let cubic = IntPoly::new(alloc::vec![c0, -(&b - &a), -a, BigInt::from(1)]);
            // n = 1 leaves λ^{q-3}·λ(λ² - λ - (q-1)); keep the exponent nonnegative
            let v = cubic.lambda_valuation().unwrap_or(0);
            let core = IntPoly::new(cubic.coeffs()[v..].to_vec());
            FactoredPoly::new(sign_q).with_lambda(qn + v as u64 - 3).with(core, 1)
        }
        J2Case::UnitSquare if q % 2 == 0 => {
            FactoredPoly::new(1).with_lambda(zeros).with(lin(-1), qn / 2).with(lin(1), (qn - 2 * zeros) / 2)
        }
        J2Case::UnitNonsquare if q % 2 == 0 => {
            FactoredPoly::new(1).with_lambda(zeros).with(lin(-1), units / 2).with(lin(1), units / 2)
        }
        J2Case::UnitSquare => predict_unit_odd(q, n, true)?,
        J2Case::UnitNonsquare => predict_unit_odd(q, n, false)?,
        J2Case::Radical => {
            if n < 2 {
                return Err(hyp("a field has no nonzero radical element"));
            }
            FactoredPoly::new(sign_q).with_lambda(qn - 2 * q + 2).with(lambda_sq_minus(zeros), q - 1)
        }
    })
}

/// Claimed number of unit squares: `(q^n - q^{n-1})/2` for odd `q`.
pub fn unit_square_count_odd(q: u64, n: u32) -> u64 {
    (q.pow(n) - q.pow(n - 1)) / 2
}

/// Claimed number of unit squares in the `char = 2^n` branch: `(q^n - q^{n-1})/4`.
pub fn unit_square_count_even(q: u64, n: u32) -> u64 {
    (q.pow(n) - q.pow(n - 1)) / 4
}

/// Claimed number of squares in `J^k \ J^{k+1}`, `k` even, `q` odd.
pub fn stratum_square_count(q: u64, n: u32, k: usize) -> u64 {
    q.pow(n - k as u32 - 1) * (q - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_field, build_null_extension, build_poly_quotient, build_product, build_zn, ModPoly};
    use crate::matrix::ProductMatrix;
    use crate::ring::DEFAULT_ORDER_CAP as CAP;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn oracle(ring: &FiniteRing, u: u16) -> IntPoly {
        ProductMatrix::natural(ring, ElementId(u)).unwrap().charpoly_lowrank().unwrap()
    }

    fn tag(ring: &FiniteRing, u: u16) -> CaseTag {
        classify(ring, ElementId(u)).unwrap().tag
    }

    fn monomial(k: usize) -> IntPoly {
        IntPoly::lambda().pow(k as u64)
    }

    #[test]
    fn odd_unit_values() {
        let z9 = build_zn(9, CAP).unwrap();
        assert_eq!(predict_unit_odd(3, 2, true).unwrap().expand(), oracle(&z9, 1));
        assert_eq!(predict_unit_odd(3, 2, true).unwrap().to_string(), "−λ^3(λ−1)^4(λ+1)^2");
        assert_eq!(predict_unit_odd(3, 1, true).unwrap().expand(), -(monomial(1) * lin(-1).pow(2)));
        let z5 = build_zn(5, CAP).unwrap();
        assert_eq!(predict_unit_odd(5, 1, false).unwrap().expand(), oracle(&z5, 2));
        assert!(predict_unit_odd(2, 2, true).is_err());
    }

    #[test]
    fn zero_maxnil_values() {
        for q in [2u64, 3, 5, 7] {
            let qi = q as i64;
            let cubic = p(&[qi * (qi - 1) * (qi - 1), -qi * (qi - 1), -qi, 1]);
            let sign = if q % 2 == 0 { 1 } else { -1 };
            let expected = (monomial((q * q - 3) as usize) * cubic).scale(&BigInt::from(sign));
            assert_eq!(predict_zero_maxnil(q, 2).unwrap(), expected);
        }
        let z8 = build_zn(8, CAP).unwrap();
        assert_eq!(predict_zero_maxnil(2, 3).unwrap(), oracle(&z8, 0));
        assert_eq!(predict_zero_maxnil(2, 3).unwrap().lambda_valuation(), Some(4));
        let z3 = build_zn(3, CAP).unwrap();
        assert_eq!(predict_zero_maxnil(3, 1).unwrap(), oracle(&z3, 0));
        let z2 = build_zn(2, CAP).unwrap();
        assert_eq!(predict_zero_maxnil(2, 1).unwrap(), oracle(&z2, 0));
    }

    fn loops_oracle(ring: &FiniteRing) -> IntPoly {
        let a = ProductMatrix::natural(ring, ElementId(0)).unwrap();
        let idx: Vec<usize> = ring.non_units().into_iter().filter(|&x| x != ring.zero()).map(|x| x.index()).collect();
        a.bits().principal(&idx).to_int_matrix().charpoly_berkowitz()
    }

    #[test]
    fn adjacency_with_loops() {
        assert_eq!(predict_adjacency_loops(2, 2).unwrap(), p(&[1, -1]));
        assert_eq!(predict_adjacency_loops(3, 2).unwrap(), p(&[0, -2, 1]));
        for m in [4u64, 8, 9, 16, 27, 25] {
            let r = build_zn(m, CAP).unwrap();
            let prof = LocalProfile::compute(&r).unwrap();
            assert_eq!(predict_adjacency_loops(prof.q, prof.n).unwrap(), loops_oracle(&r), "Z_{m}");
        }
        assert!(predict_adjacency_loops(3, 1).is_err());
    }

    #[test]
    fn even_unit_values() {
        let z8 = build_zn(8, CAP).unwrap();
        assert_eq!(predict_unit_even_maxnil(2, 3, 8, true).unwrap().expand(), monomial(4) * lin(-1).pow(4));
        assert_eq!(
            predict_unit_even_maxnil(2, 3, 8, false).unwrap().expand(),
            monomial(4) * lin(-1).pow(2) * lin(1).pow(2)
        );
        assert_eq!(predict_unit_even_maxnil(2, 3, 8, true).unwrap().expand(), oracle(&z8, 1));
        for u in [3, 5, 7] {
            assert_eq!(tag(&z8, u), CaseTag::UnitEvenChar2nNonsq);
            assert_eq!(predict_unit_even_maxnil(2, 3, 8, false).unwrap().expand(), oracle(&z8, u));
        }
        assert_eq!(predict_unit_even_maxnil(2, 3, 2, true).unwrap().to_string(), "λ^4(λ+1)^4");
        assert!(matches!(predict_unit_even_maxnil(2, 2, 4, true), Err(Error::Unsupported(_))));
    }

    #[test]
    fn stratum_values() {
        let z27 = build_zn(27, CAP).unwrap();
        let sq = -(monomial(21) * lin(3).pow(2) * lin(-3).pow(4));
        let nonsq = -(monomial(21) * lin(3).pow(3) * lin(-3).pow(3));
        assert_eq!(predict_stratum(3, 3, 2, true).unwrap().expand(), sq);
        assert_eq!(predict_stratum(3, 3, 2, false).unwrap().expand(), nonsq);
        assert_eq!(oracle(&z27, 9), sq);
        assert_eq!(oracle(&z27, 18), nonsq);
        let z8 = build_zn(8, CAP).unwrap();
        let k_odd = predict_stratum(2, 3, 1, false).unwrap().expand();
        assert_eq!(k_odd, monomial(4) * lambda_sq_minus(2).pow(2));
        assert_eq!(k_odd, oracle(&z8, 2));
        assert!(matches!(predict_stratum(2, 3, 2, true), Err(Error::Unsupported(_))));
        assert!(predict_stratum(3, 3, 3, true).is_err());
        // k = 0 collapses to the odd-unit formula
        assert_eq!(predict_stratum(3, 2, 0, true).unwrap().expand(), predict_unit_odd(3, 2, true).unwrap().expand());
    }

    #[test]
    fn j2zero_values() {
        let ne = build_null_extension(2, 1, 3, CAP).unwrap();
        let expected = monomial(5) * p(&[12, -4, -4, 1]);
        assert_eq!(predict_j2zero(2, 3, J2Case::Zero).unwrap().expand(), expected);
        assert_eq!(oracle(&ne, 0), expected);
        let z4 = build_zn(4, CAP).unwrap();
        let radical = predict_j2zero(2, 2, J2Case::Radical).unwrap().expand();
        assert_eq!(radical, monomial(2) * lambda_sq_minus(2));
        assert_eq!(radical, oracle(&z4, 2));
        assert_eq!(predict_j2zero(2, 2, J2Case::UnitSquare).unwrap().expand(), oracle(&z4, 1));
        assert_eq!(predict_j2zero(2, 2, J2Case::UnitNonsquare).unwrap().expand(), oracle(&z4, 3));
        // both theorems cover Z_9 at u = 0
        assert_eq!(predict_j2zero(3, 2, J2Case::Zero).unwrap().expand(), predict_zero_maxnil(3, 2).unwrap());
        let f4 = build_field(2, 2, CAP).unwrap();
        assert_eq!(predict_j2zero(4, 1, J2Case::Zero).unwrap().expand(), oracle(&f4, 0));
        assert_eq!(predict_j2zero(4, 1, J2Case::UnitSquare).unwrap().expand(), oracle(&f4, 1));
        assert!(predict_j2zero(3, 1, J2Case::Radical).is_err());
    }

    #[test]
    fn degrees_are_the_order() {
        for (q, n) in [(2u64, 1u32), (3, 1), (2, 2), (3, 2), (4, 2), (5, 2), (2, 3), (3, 3), (2, 4)] {
            let qn = q.pow(n);
            if q % 2 == 1 {
                for s in [true, false] {
                    assert_eq!(predict_unit_odd(q, n, s).unwrap().degree(), qn);
                }
            }
            assert_eq!(predict_zero_maxnil(q, n).unwrap().degree(), Some(qn as usize));
            for case in [J2Case::Zero, J2Case::UnitSquare, J2Case::UnitNonsquare, J2Case::Radical] {
                // over a field of even order every unit is a square
                if q % 2 == 0 && n == 1 && case == J2Case::UnitNonsquare {
                    continue;
                }
                if let Ok(f) = predict_j2zero(q, n, case) {
                    assert_eq!(f.degree(), qn, "{q} {n} {case:?}");
                }
            }
            for k in 0..n as usize {
                for s in [true, false] {
                    if let Ok(f) = predict_stratum(q, n, k, s) {
                        assert_eq!(f.degree(), qn);
                    }
                }
            }
        }
    }

    #[test]
    fn classification_examples() {
        let z27 = build_zn(27, CAP).unwrap();
        assert_eq!(tag(&z27, 9), CaseTag::StratumKEvenSq);
        assert_eq!(tag(&z27, 18), CaseTag::StratumKEvenNonsq);
        assert_eq!(tag(&z27, 3), CaseTag::StratumKOdd);
        assert_eq!(tag(&z27, 0), CaseTag::U0MaxNil);
        assert_eq!(tag(&z27, 1), CaseTag::UnitOddSq);
        assert_eq!(tag(&z27, 2), CaseTag::UnitOddNonsq);
        let z4 = build_zn(4, CAP).unwrap();
        assert_eq!(tag(&z4, 3), CaseTag::J2ZeroUnitNonsqEven);
        assert_eq!(tag(&z4, 1), CaseTag::J2ZeroUnitSqEven);
        assert_eq!(tag(&z4, 2), CaseTag::J2ZeroRadical);
        assert_eq!(tag(&z4, 0), CaseTag::J2ZeroU0);
        let z8 = build_zn(8, CAP).unwrap();
        assert_eq!(tag(&z8, 1), CaseTag::UnitEvenChar2nSq);
        assert_eq!(tag(&z8, 4), CaseTag::Unsupported(Unsupported::StratumEvenKEvenQ));
        let c = classify(&z8, ElementId(2)).unwrap();
        assert_eq!((c.tag, c.scrutiny), (CaseTag::StratumKOdd, true));
        let z6 = build_zn(6, CAP).unwrap();
        assert_eq!(tag(&z6, 0), CaseTag::Unsupported(Unsupported::NotLocal));
        let z2 = build_zn(2, CAP).unwrap();
        let f = ModPoly::from_integers(&z2, &[0, 0, 0, 1]).unwrap();
        let r = build_poly_quotient(&z2, &f, CAP).unwrap();
        assert_eq!(tag(&r, 1), CaseTag::UnitEvenChar2);
        let nonmax = build_null_extension(3, 1, 3, CAP).unwrap();
        assert_eq!(tag(&nonmax, 0), CaseTag::J2ZeroU0);
        let prod = build_product(&z2, &z2, CAP).unwrap();
        assert_eq!(tag(&prod, 1), CaseTag::Unsupported(Unsupported::NotLocal));
        assert_eq!(CaseTag::Unsupported(Unsupported::NotLocal).to_string(), "UNSUPPORTED(not_local)");
    }

    #[test]
    fn intermediate_nilpotency_is_refused() {
        // Z_4[x]/(x^2): q = 2, n = 4, J^3 = 0 ≠ J^2
        let z4 = build_zn(4, CAP).unwrap();
        let f = ModPoly::from_integers(&z4, &[0, 0, 1]).unwrap();
        let r = build_poly_quotient(&z4, &f, CAP).unwrap();
        let prof = LocalProfile::compute(&r).unwrap();
        assert_eq!((prof.n, prof.nil_index), (4, 3));
        assert_eq!(tag(&r, 0), CaseTag::Unsupported(Unsupported::NotMaximalNilpotent));
        assert_eq!(tag(&r, 1), CaseTag::Unsupported(Unsupported::NotMaximalNilpotent));
    }

    #[test]
    fn characteristic_four_chain_ring_is_refused() {
        // Z_4[x]/(x^2 + 2) is a chain ring with q = 2, n = 4 and characteristic 4
        let z4 = build_zn(4, CAP).unwrap();
        let f = ModPoly::from_integers(&z4, &[2, 0, 1]).unwrap();
        let r = build_poly_quotient(&z4, &f, CAP).unwrap();
        let prof = LocalProfile::compute(&r).unwrap();
        assert_eq!((prof.n, prof.nil_index, prof.characteristic), (4, 4, 4));
        assert_eq!(tag(&r, 1), CaseTag::Unsupported(Unsupported::EvenUnitCharacteristic));
        assert_eq!(tag(&r, 0), CaseTag::U0MaxNil);
    }

    #[test]
    fn single_theorem_classification() {
        let z4 = build_zn(4, CAP).unwrap();
        let prof = LocalProfile::compute(&z4).unwrap();
        let t = classify_under(&z4, ElementId(1), &prof, Theorem::EvenUnit).unwrap();
        assert_eq!(t, CaseTag::Unsupported(Unsupported::EvenUnitCharacteristic));
        let t = classify_under(&z4, ElementId(0), &prof, Theorem::ZeroMaxNil).unwrap();
        assert_eq!(t, CaseTag::U0MaxNil);
        let t = classify_under(&z4, ElementId(1), &prof, Theorem::Stratum).unwrap();
        assert_eq!(t, CaseTag::Unsupported(Unsupported::OutsideTheorem));
        assert!(classify_under(&z4, ElementId(9), &prof, Theorem::J2Zero).is_err());
    }

    #[test]
    fn predictions_match_across_small_rings() {
        let z2 = build_zn(2, CAP).unwrap();
        let z3 = build_zn(3, CAP).unwrap();
        let x2 = |b: &FiniteRing| build_poly_quotient(b, &ModPoly::from_integers(b, &[0, 0, 1]).unwrap(), CAP).unwrap();
        let rings =
            [build_zn(9, CAP).unwrap(), build_zn(25, CAP).unwrap(), build_zn(16, CAP).unwrap(), x2(&z2), x2(&z3)];
        for r in &rings {
            for u in r.elements() {
                let c = classify(r, u).unwrap();
                if let Some(f) = c.predict().unwrap() {
                    if c.tag == CaseTag::UnitEvenChar2 {
                        continue;
                    }
                    assert_eq!(f.expand(), oracle(r, u.0), "{} {}", r.label(u), c.tag);
                }
            }
        }
    }
}
