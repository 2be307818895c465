//! Constructors for the ring families, and the textual ring-spec language.
//!
//! Grammar:
//!
//! ```text
//! spec := "zn:" m
//!       | "field:" p "," r
//!       | "polyquot:" spec ";f=" poly
//!       | "nullext:" p "," r ";n=" n
//!       | "product:[" spec "][" spec "]"
//! poly := term (("+" | "-") term)*       e.g. x^2+2x+1, x^3, x^2-2
//! ```
//!
//! Element enumeration is fixed per constructor: integers ascending for `zn`;
//! for digit-vector rings (quotients, null extensions, products) the vectors
//! are listed lexicographically with the constant coordinate most significant,
//! and then the unity is moved to index 1 (everything between shifts up one).

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::ring::{ElementId, FiniteRing, MAX_ORDER};

fn check_order(base: usize, exp: usize, cap: usize) -> Result<usize> {
    let mut n: u128 = 1;
    for _ in 0..exp {
        n = n.saturating_mul(base as u128);
    }
    let limit = cap.min(MAX_ORDER);
    if n > limit as u128 {
        return Err(Error::CapExceeded { order: n, cap: limit });
    }
    Ok(n as usize)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, k)` with `n = p^k` for a prime `p`, if `n` is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut k = 0;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

/// The integers modulo `m`, element `i` labeled `"i"`.
pub fn build_zn(m: u64, cap: usize) -> Result<FiniteRing> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("zn needs m >= 2, got {m}")));
    }
    let n = check_order(m as usize, 1, cap)?;
    let mut add = vec![0u16; n * n];
    let mut mul = vec![0u16; n * n];
    for a in 0..n {
        for b in 0..n {
            add[a * n + b] = ((a + b) % n) as u16;
            mul[a * n + b] = ((a * b) % n) as u16;
        }
    }
    let labels = (0..n).map(|i| i.to_string()).collect();
    FiniteRing::from_tables(add, mul, labels)
}

// ---- polynomials over Z_p, used for the irreducible search ----

fn zp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    // b monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let t = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        if t != 0 {
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - t * bi % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn zp_is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    for e in 1..=d / 2 {
        let count = (p as usize).pow(e as u32);
        for low in 0..count {
            let mut g = vec![0u64; e + 1];
            let mut t = low;
            for c in g.iter_mut().take(e) {
                *c = (t % p as usize) as u64;
                t /= p as usize;
            }
            g[e] = 1;
            if zp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `r` over `Z_p`, ordering
/// candidates `x^r + c_{r-1}x^{r-1} + .. + c_0` by the integer `Σ c_i p^i`.
pub fn smallest_irreducible(p: u64, r: u32) -> Vec<u64> {
    let r = r as usize;
    let count = (p as u128).pow(r as u32);
    for low in 0..count {
        let mut f = vec![0u64; r + 1];
        let mut t = low;
        for c in f.iter_mut().take(r) {
            *c = (t % p as u128) as u64;
            t /= p as u128;
        }
        f[r] = 1;
        if zp_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over prime fields")
}

/// The field with `p^r` elements, as `Z_p[a]/(f)` for the smallest irreducible `f`.
pub fn build_field(p: u64, r: u32, cap: usize) -> Result<FiniteRing> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("field needs a prime p, got {p}")));
    }
    if r == 0 {
        return Err(Error::InvalidInput("field needs r >= 1".into()));
    }
    check_order(p as usize, r as usize, cap)?;
    let base = build_zn(p, cap)?;
    if r == 1 {
        return Ok(base);
    }
    let f = smallest_irreducible(p, r);
    let coeffs: Vec<i64> = f.iter().map(|&c| c as i64).collect();
    let modulus = ModPoly::from_integers(&base, &coeffs)?;
    build_poly_quotient_with_var(&base, &modulus, "a", cap)
}

/// A monic polynomial with coefficients in a base ring, ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    coeffs: Vec<ElementId>,
}

impl ModPoly {
    /// Normalizes to a monic polynomial; the leading coefficient must be a unit.
    pub fn new(base: &FiniteRing, mut coeffs: Vec<ElementId>) -> Result<Self> {
        while coeffs.last() == Some(&base.zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput("modulus must have degree >= 1".into()));
        }
        let lead = *coeffs.last().unwrap();
        let inv = base
            .inverse(lead)
            .map_err(|_| Error::InvalidInput("modulus is not monic: leading coefficient is not a unit".into()))?;
        for c in coeffs.iter_mut() {
            *c = base.mul(*c, inv);
        }
        Ok(ModPoly { coeffs })
    }

    /// Integer coefficients (ascending) reduced into the base ring.
    pub fn from_integers(base: &FiniteRing, coeffs: &[i64]) -> Result<Self> {
        Self::new(base, coeffs.iter().map(|&c| base.from_integer(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ElementId] {
        &self.coeffs
    }
}

/// Element ids of a digit-vector ring, in the canonical enumeration.
struct DigitIndexing {
    radix: usize,
    len: usize,
    unity_lex: usize,
}

impl DigitIndexing {
    fn id_of_lex(&self, lex: usize) -> usize {
        if lex == 0 || lex > self.unity_lex {
            lex
        } else if lex == self.unity_lex {
            1
        } else {
            lex + 1
        }
    }

    fn lex_of_digits(&self, digits: &[u16]) -> usize {
        digits.iter().fold(0, |acc, &c| acc * self.radix + c as usize)
    }

    fn digits_of_lex(&self, mut lex: usize, out: &mut [u16]) {
        for i in (0..self.len).rev() {
            out[i] = (lex % self.radix) as u16;
            lex /= self.radix;
        }
    }
}

/// Builds a ring on `base^len` with digitwise addition and the given product.
///
/// `mul_digits(a, b, out)` receives coordinate vectors (constant coordinate
/// first) and writes the product's coordinates into `out`.
fn build_digit_ring<M, L>(base: &FiniteRing, len: usize, cap: usize, mul_digits: M, label: L) -> Result<FiniteRing>
where
    M: Fn(&[u16], &[u16], &mut [u16]),
    L: Fn(&[u16]) -> String,
{
    let b = base.order();
    let n = check_order(b, len, cap)?;
    let idx = DigitIndexing { radix: b, len, unity_lex: b.pow(len as u32 - 1) };
    let mut digits = vec![0u16; n * len];
    for lex in 0..n {
        let id = idx.id_of_lex(lex);
        idx.digits_of_lex(lex, &mut digits[id * len..(id + 1) * len]);
    }
    let mut add = vec![0u16; n * n];
    let mut mul = vec![0u16; n * n];
    let mut tmp = vec![0u16; len];
    for a in 0..n {
        let da = &digits[a * len..(a + 1) * len];
        for bb in a..n {
            let db = &digits[bb * len..(bb + 1) * len];
            for i in 0..len {
                tmp[i] = base.add(ElementId(da[i]), ElementId(db[i])).0;
            }
            let s = idx.id_of_lex(idx.lex_of_digits(&tmp)) as u16;
            add[a * n + bb] = s;
            add[bb * n + a] = s;
            mul_digits(da, db, &mut tmp);
            let p = idx.id_of_lex(idx.lex_of_digits(&tmp)) as u16;
            mul[a * n + bb] = p;
            mul[bb * n + a] = p;
        }
    }
    let labels = (0..n).map(|id| label(&digits[id * len..(id + 1) * len])).collect();
    FiniteRing::from_tables(add, mul, labels)
}

fn is_plain_integer(label: &str) -> bool {
    !label.is_empty() && label.bytes().all(|c| c.is_ascii_digit())
}

fn coefficient_term(label: &str, unit: &str) -> String {
    if label == "1" {
        unit.to_string()
    } else if is_plain_integer(label) {
        format!("{label}{unit}")
    } else {
        format!("({label}){unit}")
    }
}

fn pick_variable(base: &FiniteRing) -> &'static str {
    ["x", "y", "z", "w", "t"]
        .into_iter()
        .find(|v| !base.labels().iter().any(|l| l.contains(v)))
        .unwrap_or("t")
}

/// `base[x]/(f)` for a monic `f`; the variable name avoids letters used by the base labels.
pub fn build_poly_quotient(base: &FiniteRing, f: &ModPoly, cap: usize) -> Result<FiniteRing> {
    build_poly_quotient_with_var(base, f, pick_variable(base), cap)
}

pub fn build_poly_quotient_with_var(base: &FiniteRing, f: &ModPoly, var: &str, cap: usize) -> Result<FiniteRing> {
    let d = f.degree();
    let fc: Vec<ElementId> = f.coeffs().to_vec();
    let mul_digits = |a: &[u16], b: &[u16], out: &mut [u16]| {
        let mut c = [ElementId::ZERO; 64];
        let c = &mut c[..2 * d - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                let t = base.mul(ElementId(ai), ElementId(bj));
                c[i + j] = base.add(c[i + j], t);
            }
        }
        for k in (d..2 * d - 1).rev() {
            let t = c[k];
            if t == ElementId::ZERO {
                continue;
            }
            c[k] = ElementId::ZERO;
            for i in 0..d {
                let s = base.mul(t, fc[i]);
                c[k - d + i] = base.sub(c[k - d + i], s);
            }
        }
        for i in 0..d {
            out[i] = c[i].0;
        }
    };
    if d > 32 {
        return Err(Error::InvalidInput("modulus degree above 32 is not supported".into()));
    }
    let label = |digits: &[u16]| {
        let mut terms = Vec::new();
        for i in (0..d).rev() {
            let c = digits[i];
            if c == 0 {
                continue;
            }
            let cl = base.label(ElementId(c));
            terms.push(match i {
                0 => cl.to_string(),
                1 => coefficient_term(cl, var),
                _ => coefficient_term(cl, &format!("{var}^{i}")),
            });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    };
    build_digit_ring(base, d, cap, mul_digits, label)
}

/// `F_q ⊕ F_q^{n-1}` with `(a, v)(b, w) = (ab, aw + bv)`, so the radical squares to zero.
pub fn build_null_extension(p: u64, r: u32, n: u32, cap: usize) -> Result<FiniteRing> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("nullext needs n >= 2, got {n}")));
    }
    let q = (p as usize).checked_pow(r).unwrap_or(usize::MAX);
    check_order(q, n as usize, cap)?;
    let field = build_field(p, r, cap)?;
    let len = n as usize;
    let f = &field;
    let mul_digits = |a: &[u16], b: &[u16], out: &mut [u16]| {
        out[0] = f.mul(ElementId(a[0]), ElementId(b[0])).0;
        for i in 1..len {
            let x = f.mul(ElementId(a[0]), ElementId(b[i]));
            let y = f.mul(ElementId(b[0]), ElementId(a[i]));
            out[i] = f.add(x, y).0;
        }
    };
    let label = |digits: &[u16]| {
        let mut terms = Vec::new();
        if digits[0] != 0 {
            terms.push(f.label(ElementId(digits[0])).to_string());
        }
        for (i, &c) in digits.iter().enumerate().skip(1) {
            if c != 0 {
                terms.push(coefficient_term(f.label(ElementId(c)), &format!("e{i}")));
            }
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    };
    build_digit_ring(&field, len, cap, mul_digits, label)
}

/// Direct product `A × B`; never local, but useful for locality tests.
pub fn build_product(a: &FiniteRing, b: &FiniteRing, cap: usize) -> Result<FiniteRing> {
    let (na, nb) = (a.order(), b.order());
    let n = check_order(na * nb, 1, cap)?;
    let unity_lex = nb + 1;
    let id_of = |lex: usize| {
        if lex == 0 || lex > unity_lex {
            lex
        } else if lex == unity_lex {
            1
        } else {
            lex + 1
        }
    };
    let mut pair = vec![(0usize, 0usize); n];
    for lex in 0..n {
        pair[id_of(lex)] = (lex / nb, lex % nb);
    }
    let mut add = vec![0u16; n * n];
    let mut mul = vec![0u16; n * n];
    for x in 0..n {
        let (x1, x2) = pair[x];
        for y in 0..n {
            let (y1, y2) = pair[y];
            let s1 = a.add(ElementId(x1 as u16), ElementId(y1 as u16)).index();
            let s2 = b.add(ElementId(x2 as u16), ElementId(y2 as u16)).index();
            add[x * n + y] = id_of(s1 * nb + s2) as u16;
            let p1 = a.mul(ElementId(x1 as u16), ElementId(y1 as u16)).index();
            let p2 = b.mul(ElementId(x2 as u16), ElementId(y2 as u16)).index();
            mul[x * n + y] = id_of(p1 * nb + p2) as u16;
        }
    }
    let labels = pair
        .iter()
        .map(|&(i, j)| format!("({},{})", a.label(ElementId(i as u16)), b.label(ElementId(j as u16))))
        .collect();
    FiniteRing::from_tables(add, mul, labels)
}

/// Declarative description of a ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Zn { m: u64 },
    Field { p: u64, r: u32 },
    /// `base[x]/(f)`; `modulus` holds integer coefficients in ascending degree.
    PolyQuot { base: Box<RingSpec>, modulus: Vec<i64> },
    NullExt { p: u64, r: u32, n: u32 },
    Product(Box<RingSpec>, Box<RingSpec>),
}

impl RingSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            RingSpec::Zn { .. } => "zn",
            RingSpec::Field { .. } => "field",
            RingSpec::PolyQuot { .. } => "polyquot",
            RingSpec::NullExt { .. } => "nullext",
            RingSpec::Product(..) => "product",
        }
    }

    /// Parameter checks that do not need the ring itself.
    pub fn validate(&self) -> Result<()> {
        match self {
            RingSpec::Zn { m } if *m < 2 => Err(Error::InvalidInput(format!("zn needs m >= 2, got {m}"))),
            RingSpec::Field { p, r } | RingSpec::NullExt { p, r, .. } if !is_prime(*p) || *r == 0 => {
                Err(Error::InvalidInput(format!("need a prime p and r >= 1, got p={p}, r={r}")))
            }
            RingSpec::NullExt { n, .. } if *n < 2 => Err(Error::InvalidInput(format!("nullext needs n >= 2, got {n}"))),
            RingSpec::PolyQuot { base, modulus } => {
                if modulus.iter().rposition(|&c| c != 0).unwrap_or(0) == 0 {
                    return Err(Error::InvalidInput("modulus must have degree >= 1".into()));
                }
                base.validate()
            }
            RingSpec::Product(a, b) => {
                a.validate()?;
                b.validate()
            }
            _ => Ok(()),
        }
    }

    pub fn build(&self, cap: usize) -> Result<FiniteRing> {
        self.validate()?;
        match self {
            RingSpec::Zn { m } => build_zn(*m, cap),
            RingSpec::Field { p, r } => build_field(*p, *r, cap),
            RingSpec::PolyQuot { base, modulus } => {
                let base = base.build(cap)?;
                let f = ModPoly::from_integers(&base, modulus)?;
                build_poly_quotient(&base, &f, cap)
            }
            RingSpec::NullExt { p, r, n } => build_null_extension(*p, *r, *n, cap),
            RingSpec::Product(a, b) => build_product(&a.build(cap)?, &b.build(cap)?, cap),
        }
    }

    /// Number of elements, computed from the parameters alone.
    pub fn order(&self) -> Option<u128> {
        match self {
            RingSpec::Zn { m } => Some(*m as u128),
            RingSpec::Field { p, r } => (*p as u128).checked_pow(*r),
            RingSpec::PolyQuot { base, modulus } => {
                let d = modulus.iter().rposition(|&c| c != 0)? as u32;
                base.order()?.checked_pow(d)
            }
            RingSpec::NullExt { p, r, n } => (*p as u128).checked_pow(*r)?.checked_pow(*n),
            RingSpec::Product(a, b) => a.order()?.checked_mul(b.order()?),
        }
    }
}

fn fmt_int_poly(coeffs: &[i64], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else if first { "" } else { "+" };
        let mag = c.unsigned_abs();
        let body = match (i, mag) {
            (0, m) => m.to_string(),
            (1, 1) => "x".to_string(),
            (1, m) => format!("{m}x"),
            (k, 1) => format!("x^{k}"),
            (k, m) => format!("{m}x^{k}"),
        };
        write!(f, "{sign}{body}")?;
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zn { m } => write!(f, "zn:{m}"),
            RingSpec::Field { p, r } => write!(f, "field:{p},{r}"),
            RingSpec::PolyQuot { base, modulus } => {
                write!(f, "polyquot:{base};f=")?;
                fmt_int_poly(modulus, f)
            }
            RingSpec::NullExt { p, r, n } => write!(f, "nullext:{p},{r};n={n}"),
            RingSpec::Product(a, b) => write!(f, "product:[{a}][{b}]"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected `{tok}`"))
        }
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(c) = self.peek().filter(u8::is_ascii_digit) {
            v = match v.checked_mul(10).and_then(|v| v.checked_add((c - b'0') as u64)) {
                Some(v) => v,
                None => {
                    self.pos = start;
                    return self.err("integer too large");
                }
            };
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an integer");
        }
        Ok(v)
    }

    fn small(&mut self) -> Result<u32> {
        let start = self.pos;
        let v = self.uint()?;
        u32::try_from(v).or_else(|_| {
            self.pos = start;
            self.err("integer too large")
        })
    }

    fn spec(&mut self) -> Result<RingSpec> {
        self.skip_ws();
        if self.eat("zn:") {
            Ok(RingSpec::Zn { m: self.uint()? })
        } else if self.eat("field:") {
            let p = self.uint()?;
            self.expect(",")?;
            Ok(RingSpec::Field { p, r: self.small()? })
        } else if self.eat("polyquot:") {
            let base = self.spec()?;
            self.expect(";")?;
            self.expect("f")?;
            self.expect("=")?;
            let modulus = self.poly()?;
            Ok(RingSpec::PolyQuot { base: Box::new(base), modulus })
        } else if self.eat("nullext:") {
            let p = self.uint()?;
            self.expect(",")?;
            let r = self.small()?;
            self.expect(";")?;
            self.expect("n")?;
            self.expect("=")?;
            Ok(RingSpec::NullExt { p, r, n: self.small()? })
        } else if self.eat("product:") {
            self.expect("[")?;
            let a = self.spec()?;
            self.expect("]")?;
            self.expect("[")?;
            let b = self.spec()?;
            self.expect("]")?;
            Ok(RingSpec::Product(Box::new(a), Box::new(b)))
        } else {
            self.err("expected one of zn:, field:, polyquot:, nullext:, product:")
        }
    }

    fn poly(&mut self) -> Result<Vec<i64>> {
        let mut coeffs: Vec<i64> = Vec::new();
        let mut first = true;
        loop {
            self.skip_ws();
            let negative = if self.eat("-") {
                true
            } else if first || self.eat("+") {
                false
            } else {
                break;
            };
            self.skip_ws();
            let start = self.pos;
            let coef = match self.peek() {
                Some(c) if c.is_ascii_digit() => Some(self.uint()?),
                _ => None,
            };
            self.eat("*");
            let exp = if self.eat("x") {
                if self.eat("^") {
                    self.small()?
                } else {
                    1
                }
            } else if coef.is_some() {
                0
            } else {
                self.pos = start;
                return self.err("expected a polynomial term");
            };
            if exp > 64 {
                return self.err("exponent too large");
            }
            let c = i64::try_from(coef.unwrap_or(1)).or_else(|_| self.err("coefficient too large"))?;
            if coeffs.len() <= exp as usize {
                coeffs.resize(exp as usize + 1, 0);
            }
            let c = if negative { -c } else { c };
            coeffs[exp as usize] = coeffs[exp as usize].checked_add(c).ok_or(Error::Parse {
                pos: self.pos,
                msg: "coefficient overflow".into(),
            })?;
            first = false;
        }
        if first {
            return self.err("empty polynomial");
        }
        Ok(coeffs)
    }
}

/// Parses the ring-spec language and validates the parameters.
pub fn parse_ring_spec(text: &str) -> Result<RingSpec> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let spec = p.spec()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return p.err("trailing input");
    }
    spec.validate()?;
    Ok(spec)
}
