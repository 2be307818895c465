//! Formula-versus-oracle comparison for one `(R, u)`.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use ringspectra_core::formulas::{
    classify_with, stratum_square_count, unit_square_count_even, unit_square_count_odd, CaseTag, Classification,
    Unsupported,
};
use ringspectra_core::local::is_local;
use ringspectra_core::{ElementId, FactoredPoly, FiniteRing, IntPoly, LocalProfile, OrderingPlan, ProductMatrix};
use serde::{Deserialize, Serialize};

use crate::export::MatrixExport;
use crate::Result;

pub const SCHEMA: u32 = 1;

/// A polynomial in three renderings; `coefficients` is ascending and decimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub coefficients: Vec<String>,
    pub expanded: String,
    pub factored: String,
}

impl PolyRecord {
    /// Integer roots are split off up to `root_bound`.
    pub fn from_poly(p: &IntPoly, root_bound: u64) -> Self {
        PolyRecord {
            coefficients: p.to_decimal_strings(),
            expanded: p.to_string(),
            factored: FactoredPoly::split_integer_roots(p, root_bound).to_string(),
        }
    }

    pub fn from_factored(f: &FactoredPoly) -> Self {
        let p = f.expand();
        PolyRecord { coefficients: p.to_decimal_strings(), expanded: p.to_string(), factored: f.to_string() }
    }

    pub fn to_poly(&self) -> Result<IntPoly> {
        Ok(IntPoly::from_decimal_strings(&self.coefficients)?)
    }
}

/// One enumerated square count against its closed-form claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareCount {
    /// `units` or `stratum:k`.
    pub scope: String,
    pub observed: u64,
    pub claimed: u64,
    pub pass: bool,
}

/// Square counts for every scope where a theorem makes a claim.
pub fn count_checks(ring: &FiniteRing, profile: &LocalProfile) -> Vec<SquareCount> {
    let (q, n) = (profile.q, profile.n);
    let mut out = Vec::new();
    let mut push = |scope: String, observed: u64, claimed: u64| {
        out.push(SquareCount { scope, observed, claimed, pass: observed == claimed });
    };
    let unit_squares = ring.units().into_iter().filter(|&u| ring.is_unit_square(u)).count() as u64;
    if q % 2 == 1 {
        push("units".into(), unit_squares, unit_square_count_odd(q, n));
    } else if profile.is_maximal() && n >= 3 && 1u64.checked_shl(n) == Some(profile.characteristic) {
        push("units".into(), unit_squares, unit_square_count_even(q, n));
    }
    if q % 2 == 1 && profile.is_maximal() {
        for k in (2..n as usize).step_by(2) {
            let observed = ring.elements().filter(|&a| profile.depth(a) == k && ring.is_square(a)).count() as u64;
            push(format!("stratum:{k}"), observed, stratum_square_count(q, n, k));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// The dense path cross-checks the low-rank oracle up to this order.
    pub dense_cross_check_limit: usize,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { dense_cross_check_limit: 512, timings: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub ring_spec: String,
    pub u_label: String,
    pub case: String,
    /// Set for odd-depth strata over even `q`.
    pub scrutiny: bool,
    pub predicted: Option<PolyRecord>,
    pub oracle: PolyRecord,
    /// Defined exactly when `predicted` is.
    #[serde(rename = "match")]
    pub matched: Option<bool>,
    pub degree: usize,
    pub nonzero_rank: usize,
    pub aux_checks: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatch_dump: Option<MatrixExport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<BTreeMap<String, f64>>,
}

impl VerifyReport {
    pub fn is_unsupported(&self) -> bool {
        self.predicted.is_none()
    }

    pub fn aux_ok(&self) -> bool {
        self.aux_checks.values().all(|&v| v)
    }
}

struct Clock {
    enabled: bool,
    phases: BTreeMap<String, f64>,
    last: Instant,
}

impl Clock {
    fn new(enabled: bool) -> Self {
        Clock { enabled, phases: BTreeMap::new(), last: Instant::now() }
    }

    fn lap(&mut self, phase: &str) {
        let now = Instant::now();
        if self.enabled {
            self.phases.insert(phase.into(), (now - self.last).as_secs_f64() * 1e3);
        }
        self.last = now;
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.enabled.then_some(self.phases)
    }
}

fn non_local_classification(ring: &FiniteRing, u: ElementId) -> Classification {
    Classification {
        tag: CaseTag::Unsupported(Unsupported::NotLocal),
        q: 0,
        n: 0,
        k: None,
        characteristic: ring.characteristic() as u64,
        is_square: ring.is_square(u),
        scrutiny: false,
    }
}

/// Classifies, predicts, computes the oracle and runs every auxiliary check.
/// An unsupported case is recorded, never raised.
pub fn verify_instance(ring: &FiniteRing, ring_spec: &str, u: ElementId, opts: &VerifyOptions) -> Result<VerifyReport> {
    let profile = if is_local(ring) { Some(LocalProfile::compute(ring)?) } else { None };
    verify_with_profile(ring, ring_spec, u, profile.as_ref(), opts)
}

/// [`verify_instance`] with the profile computed once per ring.
pub fn verify_with_profile(
    ring: &FiniteRing,
    ring_spec: &str,
    u: ElementId,
    profile: Option<&LocalProfile>,
    opts: &VerifyOptions,
) -> Result<VerifyReport> {
    ring.element(u.index())?;
    let mut clock = Clock::new(opts.timings);
    let class = match profile {
        Some(p) => classify_with(ring, u, p)?,
        None => non_local_classification(ring, u),
    };
    let predicted = class.predict()?;
    clock.lap("classify");

    let a = ProductMatrix::build(ring, u, OrderingPlan::proof(ring, u)?)?;
    let n = a.size();
    let oracle = a.charpoly_lowrank()?;
    clock.lap("oracle");

    let mut aux = BTreeMap::new();
    if n <= opts.dense_cross_check_limit {
        aux.insert("dense_lowrank_agree".to_string(), a.charpoly_dense()? == oracle);
        clock.lap("dense");
    }
    let rank = a.rank();
    let nullity = oracle.lambda_valuation().unwrap_or(n);
    let sign = if n % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
    aux.insert("symmetric".into(), a.bits().is_symmetric());
    aux.insert("trace".into(), a.trace() == ring.square_roots(u).len());
    aux.insert("degree".into(), oracle.degree() == Some(n) && oracle.leading() == sign);
    aux.insert("rank".into(), rank + nullity == n);
    aux.insert("row_sums".into(), row_sums_ok(ring, u, &a));
    if let Some(f) = &predicted {
        aux.insert("prediction_rank".into(), (f.degree() - f.lambda_multiplicity()) as usize == rank);
    }
    if let Some(p) = profile {
        let scope = match profile.map(|p| p.depth(u)) {
            Some(0) => Some("units".to_string()),
            Some(k) if u != ring.zero() => Some(format!("stratum:{k}")),
            _ => None,
        };
        if let Some(c) = count_checks(ring, p).into_iter().find(|c| Some(&c.scope) == scope.as_ref()) {
            aux.insert("square_count".into(), c.pass);
        }
    }
    clock.lap("aux");

    let matched = predicted.as_ref().map(|f| f.expand() == oracle);
    let root_bound = a.row_sums().into_iter().max().unwrap_or(0) as u64;
    let mismatch_dump = (matched == Some(false)).then(|| MatrixExport::from_matrix(ring, ring_spec, &a));
    Ok(VerifyReport {
        schema: SCHEMA,
        ring_spec: ring_spec.to_string(),
        u_label: ring.label(u).to_string(),
        case: class.tag.to_string(),
        scrutiny: class.scrutiny,
        predicted: predicted.as_ref().map(PolyRecord::from_factored),
        oracle: PolyRecord::from_poly(&oracle, root_bound),
        matched,
        degree: n,
        nonzero_rank: rank,
        aux_checks: aux,
        mismatch_dump,
        wall_time_ms: clock.finish(),
    })
}

/// Row sums against a direct count of `{(a, b) : ab = u}`; for a unit `u` every
/// unit row holds exactly one 1 and every non-unit row none.
fn row_sums_ok(ring: &FiniteRing, u: ElementId, a: &ProductMatrix) -> bool {
    let sums = a.row_sums();
    let pairs = ring.elements().map(|x| ring.elements().filter(|&y| ring.mul(x, y) == u).count()).sum::<usize>();
    if sums.iter().sum::<usize>() != pairs {
        return false;
    }
    if !ring.is_unit(u) {
        return true;
    }
    a.ordering().permutation().iter().zip(&sums).all(|(&x, &s)| s == ring.is_unit(x) as usize)
}
