//! Univariate integer polynomials in λ, expanded and factored.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

const MINUS: char = '\u{2212}';

/// Coefficients ascending by degree; never has a trailing zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `λ`.
    pub fn lambda() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `λ + c`.
    pub fn linear(c: i64) -> Self {
        Self::from_i64s(&[c, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `λ^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs: v }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `λ ↦ λ^k`.
    pub fn compose_power(&self, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        Self::new(v)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Largest `m` with `λ^m` dividing `self`; `None` for zero.
    pub fn lambda_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Quotient by `(λ - r)` when it divides exactly.
    pub fn div_linear(&self, r: &BigInt) -> Option<Self> {
        let d = self.degree()?;
        if d == 0 {
            return None;
        }
        let mut q = vec![BigInt::zero(); d];
        let mut carry = BigInt::zero();
        for i in (0..=d).rev() {
            let cur = &self.coeffs[i] + &carry * r;
            if i == 0 {
                return cur.is_zero().then(|| Self::new(q));
            }
            q[i - 1] = cur.clone();
            carry = cur;
        }
        unreachable!()
    }

    /// Exact division by a polynomial with leading coefficient ±1.
    pub fn div_exact(&self, d: &IntPoly) -> Option<Self> {
        let dd = d.degree()?;
        let lead = d.leading();
        if !lead.abs().is_one() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return self.is_zero().then(Self::zero);
        }
        let mut q = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..q.len()).rev() {
            let t = &rem[i + dd] * &lead;
            if !t.is_zero() {
                for (j, c) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &t * c;
                }
            }
            q[i] = t;
        }
        rem.iter().all(Zero::is_zero).then(|| Self::new(q))
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }

    pub fn from_decimal_strings<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let mut v = Vec::with_capacity(items.len());
        for (i, s) in items.iter().enumerate() {
            let c = s
                .as_ref()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse { pos: i, msg: "not a decimal integer".into() })?;
            v.push(c);
        }
        Ok(Self::new(v))
    }

    /// Product of many factors, multiplying smaller degrees first.
    pub fn product<I: IntoIterator<Item = IntPoly>>(items: I) -> Self {
        let mut items: Vec<IntPoly> = items.into_iter().collect();
        if items.is_empty() {
            return Self::one();
        }
        while items.len() > 1 {
            items.sort_by_key(|p| core::cmp::Reverse(p.coeffs.len()));
            let a = items.pop().unwrap();
            let b = items.pop().unwrap();
            items.push(&a * &b);
        }
        items.pop().unwrap()
    }
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        IntPoly::new(v)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: IntPoly) -> IntPoly {
        &self + &rhs
    }
}

impl Sub for IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: IntPoly) -> IntPoly {
        &self - &rhs
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: IntPoly) -> IntPoly {
        &self * &rhs
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

fn write_lambda_power(f: &mut fmt::Formatter<'_>, k: usize) -> fmt::Result {
    match k {
        0 => Ok(()),
        1 => write!(f, "λ"),
        _ => write!(f, "λ^{k}"),
    }
}

/// Descending terms, e.g. `λ^3−3λ^2−6λ+12`, with U+2212 as the minus sign.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                write!(f, "{MINUS}")?;
            } else if !first {
                write!(f, "+")?;
            }
            let mag = c.abs();
            if k == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            write_lambda_power(f, k)?;
            first = false;
        }
        Ok(())
    }
}

/// `scalar · Π factor^multiplicity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredPoly {
    pub scalar: BigInt,
    pub factors: Vec<(IntPoly, u64)>,
}

impl FactoredPoly {
    pub fn new(scalar: impl Into<BigInt>) -> Self {
        FactoredPoly { scalar: scalar.into(), factors: Vec::new() }
    }

    /// `±1` according to the parity of `e`, i.e. `(-1)^e`.
    pub fn sign(e: i64) -> Self {
        Self::new(if e.rem_euclid(2) == 0 { 1 } else { -1 })
    }

    /// Appends `factor^mult`; a zero multiplicity is dropped.
    pub fn with(mut self, factor: IntPoly, mult: u64) -> Self {
        if mult > 0 {
            self.factors.push((factor, mult));
        }
        self
    }

    pub fn with_lambda(self, mult: u64) -> Self {
        self.with(IntPoly::lambda(), mult)
    }

    /// Appends `(λ + c)^mult`.
    pub fn with_linear(self, c: i64, mult: u64) -> Self {
        self.with(IntPoly::linear(c), mult)
    }

    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|(f, m)| f.degree().unwrap_or(0) as u64 * m).sum()
    }

    /// Multiplicity of the root 0.
    pub fn lambda_multiplicity(&self) -> u64 {
        self.factors.iter().map(|(f, m)| f.lambda_valuation().unwrap_or(0) as u64 * m).sum()
    }

    pub fn expand(&self) -> IntPoly {
        let parts = self.factors.iter().map(|(f, m)| f.pow(*m));
        IntPoly::product(parts).scale(&self.scalar)
    }

    /// Splits off `λ^m` and the integer roots in `[-bound, bound]`; the
    /// remaining cofactor (if any) is kept as one factor.
    pub fn split_integer_roots(p: &IntPoly, bound: u64) -> Self {
        let Some(v) = p.lambda_valuation() else {
            return Self::new(0);
        };
        let mut rest = IntPoly::new(p.coeffs()[v..].to_vec());
        let mut out = Self::new(1).with_lambda(v as u64);
        for mag in 1..=bound as i64 {
            for r in [mag, -mag] {
                if rest.degree().unwrap_or(0) == 0 {
                    break;
                }
                let root = BigInt::from(r);
                // a root r of a polynomial with integer coefficients divides the constant term
                if !rest.coeff(0).is_multiple_of(&root) {
                    continue;
                }
                let mut m = 0;
                while let Some(q) = rest.div_linear(&root) {
                    rest = q;
                    m += 1;
                }
                out = out.with_linear(-r, m);
            }
        }
        if rest.degree().unwrap_or(0) > 0 {
            let lead = rest.leading();
            if lead.abs().is_one() {
                out.scalar = lead.clone();
                rest = rest.scale(&lead);
            }
            out.factors.push((rest, 1));
        } else {
            out.scalar = rest.coeff(0);
        }
        out
    }
}

impl fmt::Display for FactoredPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() || self.scalar.is_zero() {
            return write!(f, "{}", self.scalar.to_string().replace('-', "\u{2212}"));
        }
        if self.scalar == -BigInt::one() {
            write!(f, "{MINUS}")?;
        } else if !self.scalar.is_one() {
            write!(f, "{}", self.scalar.to_string().replace('-', "\u{2212}"))?;
        }
        for (factor, m) in &self.factors {
            if *factor == IntPoly::lambda() {
                write_lambda_power(f, *m as usize)?;
                continue;
            }
            write!(f, "({factor})")?;
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}
