//! Finite commutative rings with unity, stored as dense operation tables.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Default upper bound on ring orders accepted by the constructors.
pub const DEFAULT_ORDER_CAP: usize = 4096;

/// Hard upper bound: element ids are stored as `u16` and `u16::MAX` is reserved.
pub const MAX_ORDER: usize = u16::MAX as usize;

const NO_INVERSE: u16 = u16::MAX;

/// Index of an element inside one [`FiniteRing`].
///
/// Every constructor guarantees that index 0 is the additive identity and
/// index 1 the multiplicative identity (for rings with more than one element).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub u16);

impl ElementId {
    pub const ZERO: ElementId = ElementId(0);
    pub const ONE: ElementId = ElementId(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A finite commutative ring with unity.
///
/// Immutable after construction. Addition and multiplication are table
/// lookups; negation and inverses are precomputed by exhaustive search.
#[derive(Clone)]
pub struct FiniteRing {
    order: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing").field("order", &self.order).finish_non_exhaustive()
    }
}

impl FiniteRing {
    /// Builds a ring from row-major `order × order` tables.
    ///
    /// Checks the normalization contract (0 and 1 at indices 0 and 1),
    /// commutativity of both tables and the identity laws, and derives the
    /// negation and inverse maps. Associativity and distributivity are not
    /// checked here; see [`FiniteRing::check_axioms_exhaustive`].
    pub fn from_tables(add: Vec<u16>, mul: Vec<u16>, labels: Vec<String>) -> Result<Self> {
        let order = labels.len();
        if order < 2 {
            return Err(Error::InvalidInput("a ring needs at least two elements".into()));
        }
        if order > MAX_ORDER {
            return Err(Error::CapExceeded { order: order as u128, cap: MAX_ORDER });
        }
        if add.len() != order * order || mul.len() != order * order {
            return Err(Error::InvalidInput("operation tables have the wrong size".into()));
        }
        if add.iter().chain(mul.iter()).any(|&v| v as usize >= order) {
            return Err(Error::InvalidInput("table entry out of range".into()));
        }
        for a in 0..order {
            if add[a] as usize != a {
                return Err(Error::InvalidInput("index 0 is not the additive identity".into()));
            }
            if mul[order + a] as usize != a {
                return Err(Error::InvalidInput("index 1 is not the multiplicative identity".into()));
            }
            if mul[a] != 0 {
                return Err(Error::InvalidInput("zero does not annihilate".into()));
            }
            for b in (a + 1)..order {
                if add[a * order + b] != add[b * order + a] || mul[a * order + b] != mul[b * order + a] {
                    return Err(Error::InvalidInput(format!(
                        "tables are not commutative at ({a}, {b})"
                    )));
                }
            }
        }

        let mut neg = alloc::vec![0u16; order];
        for a in 0..order {
            let row = &add[a * order..(a + 1) * order];
            match row.iter().position(|&v| v == 0) {
                Some(b) => neg[a] = b as u16,
                None => return Err(Error::InvalidInput(format!("element {a} has no negative"))),
            }
        }
        let mut inv = alloc::vec![NO_INVERSE; order];
        for a in 0..order {
            let row = &mul[a * order..(a + 1) * order];
            if let Some(b) = row.iter().position(|&v| v == 1) {
                inv[a] = b as u16;
            }
        }
        Ok(FiniteRing { order, add, mul, neg, inv, labels })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn zero(&self) -> ElementId {
        ElementId::ZERO
    }

    #[inline]
    pub fn one(&self) -> ElementId {
        ElementId::ONE
    }

    /// Checked conversion from a raw index.
    pub fn element(&self, index: usize) -> Result<ElementId> {
        if index < self.order {
            Ok(ElementId(index as u16))
        } else {
            Err(Error::IndexOutOfRange { index, order: self.order })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.order).map(|i| ElementId(i as u16))
    }

    /// Panics if either id is out of range; see [`FiniteRing::checked_mul`].
    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        ElementId(self.mul[a.index() * self.order + b.index()])
    }

    #[inline]
    pub fn add(&self, a: ElementId, b: ElementId) -> ElementId {
        ElementId(self.add[a.index() * self.order + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: ElementId) -> ElementId {
        ElementId(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: ElementId, b: ElementId) -> ElementId {
        self.add(a, self.neg(b))
    }

    pub fn checked_mul(&self, a: ElementId, b: ElementId) -> Result<ElementId> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn checked_add(&self, a: ElementId, b: ElementId) -> Result<ElementId> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    fn check(&self, a: ElementId) -> Result<()> {
        if a.index() < self.order {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: a.index(), order: self.order })
        }
    }

    /// The row `b ↦ a·b` of the multiplication table.
    #[inline]
    pub fn mul_row(&self, a: ElementId) -> &[u16] {
        &self.mul[a.index() * self.order..(a.index() + 1) * self.order]
    }

    pub fn pow(&self, a: ElementId, mut e: u64) -> ElementId {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `n · a` for a non-negative integer `n`.
    pub fn times(&self, a: ElementId, n: u64) -> ElementId {
        let mut acc = self.zero();
        let mut base = a;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            e >>= 1;
        }
        acc
    }

    /// Image of an integer under the canonical map `Z → R`.
    pub fn from_integer(&self, n: i64) -> ElementId {
        let v = self.times(self.one(), n.unsigned_abs());
        if n < 0 {
            self.neg(v)
        } else {
            v
        }
    }

    /// True iff some `b` satisfies `a·b = 1` (exhaustive search at construction).
    #[inline]
    pub fn is_unit(&self, a: ElementId) -> bool {
        self.inv[a.index()] != NO_INVERSE
    }

    pub fn inverse(&self, a: ElementId) -> Result<ElementId> {
        self.check(a)?;
        match self.inv[a.index()] {
            NO_INVERSE => Err(Error::NotInvertible(self.label(a).to_string())),
            b => Ok(ElementId(b)),
        }
    }

    pub fn units(&self) -> Vec<ElementId> {
        self.elements().filter(|&a| self.is_unit(a)).collect()
    }

    pub fn non_units(&self) -> Vec<ElementId> {
        self.elements().filter(|&a| !self.is_unit(a)).collect()
    }

    pub fn additive_order(&self, a: ElementId) -> usize {
        let mut acc = a;
        let mut k = 1;
        while acc != self.zero() {
            acc = self.add(acc, a);
            k += 1;
        }
        k
    }

    /// Smallest `c ≥ 1` with `c · 1 = 0`.
    pub fn characteristic(&self) -> usize {
        self.additive_order(self.one())
    }

    /// Multiplicative order of a unit; `None` for non-units.
    pub fn multiplicative_order(&self, a: ElementId) -> Option<usize> {
        if !self.is_unit(a) {
            return None;
        }
        let mut acc = a;
        let mut k = 1;
        while acc != self.one() {
            acc = self.mul(acc, a);
            k += 1;
        }
        Some(k)
    }

    /// All `s` with `s·s = u`, in ascending index order.
    pub fn square_roots(&self, u: ElementId) -> Vec<ElementId> {
        self.elements().filter(|&s| self.mul(s, s) == u).collect()
    }

    pub fn is_square(&self, u: ElementId) -> bool {
        self.elements().any(|s| self.mul(s, s) == u)
    }

    /// True iff `u = s²` for some unit `s`.
    pub fn is_unit_square(&self, u: ElementId) -> bool {
        self.elements().any(|s| self.is_unit(s) && self.mul(s, s) == u)
    }

    pub fn label(&self, a: ElementId) -> &str {
        &self.labels[a.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Looks an element up by its label, ignoring whitespace.
    pub fn find_label(&self, text: &str) -> Option<ElementId> {
        let want: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        self.labels
            .iter()
            .position(|l| l.chars().filter(|c| !c.is_whitespace()).eq(want.chars()))
            .map(|i| ElementId(i as u16))
    }

    /// Checks associativity of both operations and distributivity for every triple.
    pub fn check_axioms_exhaustive(&self) -> Result<()> {
        let n = self.order as u16;
        self.check_axioms_on((0..n).flat_map(move |a| {
            (0..n).flat_map(move |b| (0..n).map(move |c| (ElementId(a), ElementId(b), ElementId(c))))
        }))
    }

    /// Checks the ring axioms on the given triples.
    pub fn check_axioms_on<I>(&self, triples: I) -> Result<()>
    where
        I: IntoIterator<Item = (ElementId, ElementId, ElementId)>,
    {
        for (a, b, c) in triples {
            self.check(a)?;
            self.check(b)?;
            self.check(c)?;
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::InvalidInput(format!("multiplication not associative at {a},{b},{c}")));
            }
            if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                return Err(Error::InvalidInput(format!("addition not associative at {a},{b},{c}")));
            }
            if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                return Err(Error::InvalidInput(format!("distributivity fails at {a},{b},{c}")));
            }
        }
        Ok(())
    }
}
