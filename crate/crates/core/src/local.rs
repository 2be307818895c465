//! Locality, the radical filtration `J ⊇ J² ⊇ …`, and digit coordinates.
//!
//! For a finite local ring the radical is the set of non-units, `|R| = q^n`
//! with `q = |R/J| = p^r`, and `J^n = 0`.

use alloc::vec;
use alloc::vec::Vec;

use crate::builders::prime_power;
use crate::error::{Error, Result};
use crate::ring::{ElementId, FiniteRing};

pub fn is_local(ring: &FiniteRing) -> bool {
    let nu = ring.non_units();
    nu.iter().all(|&a| nu.iter().all(|&b| !ring.is_unit(ring.add(a, b))))
}

/// The non-units; an error if they are not closed under addition.
pub fn jacobson_radical(ring: &FiniteRing) -> Result<Vec<ElementId>> {
    if is_local(ring) {
        Ok(ring.non_units())
    } else {
        Err(Error::NotLocal)
    }
}

/// Position of an element in the filtration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stratum {
    Unit,
    /// `a ∈ J^k \ J^{k+1}`; zero sits at the nilpotency index.
    Radical(usize),
}

/// Additive subgroup generated by `gens`, as a membership mask.
fn additive_closure(ring: &FiniteRing, gens: impl IntoIterator<Item = ElementId>) -> Vec<bool> {
    let n = ring.order();
    let mut mask = vec![false; n];
    mask[0] = true;
    let mut members = vec![ring.zero()];
    for g in gens {
        if mask[g.index()] {
            continue;
        }
        // members is a subgroup; extend it by the cyclic group of g
        let base = members.clone();
        let mut shift = g;
        while !mask[shift.index()] {
            for &m in &base {
                let s = ring.add(m, shift);
                if !mask[s.index()] {
                    mask[s.index()] = true;
                    members.push(s);
                }
            }
            shift = ring.add(shift, g);
        }
    }
    mask
}

/// Invariants of a finite local ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalProfile {
    pub p: u64,
    pub r: u32,
    pub q: u64,
    /// `|R| = q^n`.
    pub n: u32,
    /// Least `m` with `J^m = 0`.
    pub nil_index: usize,
    /// `|J^i \ J^{i+1}|` for `i = 0..=nil_index`; the last entry counts `{0}`.
    pub stratum_sizes: Vec<usize>,
    pub characteristic: u64,
    depth: Vec<u16>,
}

impl LocalProfile {
    /// Computes the filtration by closing `J^k · J` under addition until it vanishes.
    pub fn compute(ring: &FiniteRing) -> Result<Self> {
        let radical = jacobson_radical(ring)?;
        let order = ring.order();
        let q = (order / radical.len()) as u64;
        let (p, r) = prime_power(q).ok_or_else(|| Error::Internal("residue field order is not a prime power".into()))?;
        let mut n = 0u32;
        let mut t = 1u64;
        while t < order as u64 {
            t *= q;
            n += 1;
        }
        if t != order as u64 {
            return Err(Error::Internal("ring order is not a power of the residue field order".into()));
        }
        let mut depth = vec![0u16; order];
        let mut current: Vec<ElementId> = radical.clone();
        let mut k = 1usize;
        let mut stratum_sizes = vec![order - radical.len()];
        while current.len() > 1 {
            for &a in &current {
                depth[a.index()] = k as u16;
            }
            let mut seen = vec![false; order];
            let mut products = Vec::new();
            for &a in &current {
                for &b in &radical {
                    let c = ring.mul(a, b);
                    if !seen[c.index()] {
                        seen[c.index()] = true;
                        products.push(c);
                    }
                }
            }
            let mask = additive_closure(ring, products);
            let next: Vec<ElementId> = ring.elements().filter(|a| mask[a.index()]).collect();
            stratum_sizes.push(current.len() - next.len());
            if next.len() == current.len() {
                return Err(Error::Internal("radical is not nilpotent".into()));
            }
            current = next;
            k += 1;
        }
        depth[0] = k as u16;
        stratum_sizes.push(1);
        Ok(LocalProfile { p, r, q, n, nil_index: k, stratum_sizes, characteristic: ring.characteristic() as u64, depth })
    }

    pub fn stratum_of(&self, a: ElementId) -> Stratum {
        match self.depth[a.index()] {
            0 => Stratum::Unit,
            k => Stratum::Radical(k as usize),
        }
    }

    /// 0 for units, `k` for `J^k \ J^{k+1}`, the nilpotency index for 0.
    pub fn depth(&self, a: ElementId) -> usize {
        self.depth[a.index()] as usize
    }

    /// Membership in `J^k`.
    pub fn in_power(&self, a: ElementId, k: usize) -> bool {
        self.depth(a) >= k
    }

    pub fn power(&self, k: usize) -> Vec<ElementId> {
        (0..self.depth.len()).filter(|&i| self.depth[i] as usize >= k).map(|i| ElementId(i as u16)).collect()
    }

    /// `J^{n-1} ≠ 0`, i.e. the nilpotency index equals `n`.
    pub fn is_maximal(&self) -> bool {
        self.nil_index == self.n as usize
    }

    /// `J² = 0` (fields included).
    pub fn radical_squares_to_zero(&self) -> bool {
        self.nil_index <= 2
    }

    pub fn order(&self) -> u64 {
        self.q.pow(self.n)
    }
}

pub fn stratum_of(profile: &LocalProfile, a: ElementId) -> Stratum {
    profile.stratum_of(a)
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// A unit `g` of order `q - 1` and `x ∈ J \ J²` with `x^{n-1} ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureBasis {
    pub g: ElementId,
    /// Zero when `n = 1`.
    pub x: ElementId,
    /// `0, g, g², …, g^{q-1}`; the last is 1.
    pub digit_set: Vec<ElementId>,
    /// `x^0, x^1, …, x^{n-1}`.
    powers: Vec<ElementId>,
}

impl StructureBasis {
    /// Smallest-index choices: `g₁` is the least unit whose residue generates
    /// `(R/J)*`; with `ord(g₁) = p^t(q-1)`, `g = g₁^{p^t}`.
    pub fn find(ring: &FiniteRing, profile: &LocalProfile) -> Result<Self> {
        if !profile.is_maximal() {
            return Err(Error::Hypothesis(alloc::format!(
                "structure basis needs nilpotency index n = {}, found {}",
                profile.n,
                profile.nil_index
            )));
        }
        let q = profile.q;
        let primes = prime_factors(q - 1);
        let generates = |g: ElementId| {
            primes.iter().all(|&l| {
                let h = ring.pow(g, (q - 1) / l);
                !profile.in_power(ring.sub(h, ring.one()), 1)
            })
        };
        let g1 = ring
            .units()
            .into_iter()
            .find(|&g| generates(g))
            .ok_or_else(|| Error::Internal("no unit generates the residue field".into()))?;
        let ord = ring.multiplicative_order(g1).ok_or_else(|| Error::Internal("unit without finite order".into()))? as u64;
        let mut pt = ord / (q - 1);
        if ord % (q - 1) != 0 || prime_power(pt).is_some_and(|(pp, _)| pp != profile.p) {
            return Err(Error::Internal("unit order is not p^t(q-1)".into()));
        }
        if pt == 0 {
            pt = 1;
        }
        let g = ring.pow(g1, pt);
        if ring.multiplicative_order(g) != Some((q - 1) as usize) {
            return Err(Error::Internal("g does not have order q - 1".into()));
        }
        let n = profile.n as usize;
        let x = if n == 1 {
            ring.zero()
        } else {
            ring.elements()
                .find(|&a| profile.depth(a) == 1 && ring.pow(a, n as u64 - 1) != ring.zero())
                .ok_or_else(|| Error::Internal("no x in J \\ J² with x^{n-1} ≠ 0".into()))?
        };
        let mut digit_set = vec![ring.zero()];
        let mut acc = g;
        for _ in 0..q - 1 {
            digit_set.push(acc);
            acc = ring.mul(acc, g);
        }
        let powers = (0..n).map(|i| ring.pow(x, i as u64)).collect();
        Ok(StructureBasis { g, x, digit_set, powers })
    }

    /// Digits `λ_0..λ_{n-1}` from the digit set with `Σ λ_i x^i = a`, chosen stratum by stratum.
    pub fn coordinates(&self, ring: &FiniteRing, profile: &LocalProfile, a: ElementId) -> Result<Vec<ElementId>> {
        let mut rest = a;
        let mut digits = Vec::with_capacity(self.powers.len());
        for (i, &xi) in self.powers.iter().enumerate() {
            let d = self
                .digit_set
                .iter()
                .copied()
                .find(|&d| profile.in_power(ring.sub(rest, ring.mul(d, xi)), i + 1))
                .ok_or_else(|| Error::Internal(alloc::format!("no digit at position {i}")))?;
            rest = ring.sub(rest, ring.mul(d, xi));
            digits.push(d);
        }
        if rest != ring.zero() {
            return Err(Error::Internal("digit expansion leaves a nonzero remainder".into()));
        }
        Ok(digits)
    }

    pub fn evaluate(&self, ring: &FiniteRing, digits: &[ElementId]) -> ElementId {
        digits.iter().zip(&self.powers).fold(ring.zero(), |acc, (&d, &xi)| ring.add(acc, ring.mul(d, xi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_field, build_null_extension, build_poly_quotient, build_zn, ModPoly};
    use crate::ring::DEFAULT_ORDER_CAP as CAP;

    fn e(i: u16) -> ElementId {
        ElementId(i)
    }

    fn ids(v: &[ElementId]) -> Vec<u16> {
        v.iter().map(|x| x.0).collect()
    }

    #[test]
    fn radicals() {
        assert_eq!(ids(&jacobson_radical(&build_zn(8, CAP).unwrap()).unwrap()), [0, 2, 4, 6]);
        assert_eq!(ids(&jacobson_radical(&build_zn(9, CAP).unwrap()).unwrap()), [0, 3, 6]);
        assert_eq!(jacobson_radical(&build_zn(6, CAP).unwrap()), Err(Error::NotLocal));
        assert!(is_local(&build_zn(25, CAP).unwrap()));
        assert!(!is_local(&build_zn(12, CAP).unwrap()));
        assert!(is_local(&build_field(2, 2, CAP).unwrap()));
    }

    #[test]
    fn profiles() {
        let z27 = LocalProfile::compute(&build_zn(27, CAP).unwrap()).unwrap();
        assert_eq!((z27.p, z27.r, z27.q, z27.n, z27.nil_index), (3, 1, 3, 3, 3));
        assert_eq!(z27.stratum_sizes, [18, 6, 2, 1]);
        let f9 = LocalProfile::compute(&build_field(3, 2, CAP).unwrap()).unwrap();
        assert_eq!((f9.p, f9.r, f9.q, f9.n, f9.nil_index), (3, 2, 9, 1, 1));
        assert_eq!(f9.stratum_sizes, [8, 1]);
        let ne = LocalProfile::compute(&build_null_extension(2, 1, 3, CAP).unwrap()).unwrap();
        assert_eq!((ne.q, ne.n, ne.nil_index), (2, 3, 2));
        assert_eq!(ne.stratum_sizes, [4, 3, 1]);
        let ne4 = LocalProfile::compute(&build_null_extension(2, 2, 2, CAP).unwrap()).unwrap();
        assert_eq!((ne4.q, ne4.characteristic), (4, 2));
    }

    #[test]
    fn strata_of_z27() {
        let r = build_zn(27, CAP).unwrap();
        let p = LocalProfile::compute(&r).unwrap();
        assert_eq!(p.stratum_of(e(9)), Stratum::Radical(2));
        assert_eq!(p.stratum_of(e(6)), Stratum::Radical(1));
        assert_eq!(p.stratum_of(e(1)), Stratum::Unit);
        assert_eq!(p.stratum_of(e(0)), Stratum::Radical(3));
    }

    #[test]
    fn poly_quotient_filtrations() {
        let z3 = build_zn(3, CAP).unwrap();
        let r = build_poly_quotient(&z3, &ModPoly::from_integers(&z3, &[0, 0, 1]).unwrap(), CAP).unwrap();
        let p = LocalProfile::compute(&r).unwrap();
        assert_eq!((p.q, p.n, p.nil_index), (3, 2, 2));
        let z4 = build_zn(4, CAP).unwrap();
        let r = build_poly_quotient(&z4, &ModPoly::from_integers(&z4, &[2, 0, 1]).unwrap(), CAP).unwrap();
        let p = LocalProfile::compute(&r).unwrap();
        assert_eq!((p.q, p.n, p.nil_index, p.characteristic), (2, 4, 4, 4));
    }

    #[test]
    fn structure_basis_examples() {
        let r9 = build_zn(9, CAP).unwrap();
        let p9 = LocalProfile::compute(&r9).unwrap();
        let b = StructureBasis::find(&r9, &p9).unwrap();
        assert_eq!((b.g, b.x), (e(8), e(3)));
        assert_eq!(b.coordinates(&r9, &p9, e(1)).unwrap(), [e(1), e(0)]);
        assert_eq!(b.coordinates(&r9, &p9, e(0)).unwrap(), [e(0), e(0)]);

        let z2 = build_zn(2, CAP).unwrap();
        let r = build_poly_quotient(&z2, &ModPoly::from_integers(&z2, &[0, 0, 0, 1]).unwrap(), CAP).unwrap();
        let p = LocalProfile::compute(&r).unwrap();
        let b = StructureBasis::find(&r, &p).unwrap();
        assert_eq!(b.g, r.one());
        assert_eq!(b.x, r.find_label("x").unwrap());

        let r8 = build_zn(8, CAP).unwrap();
        let b = StructureBasis::find(&r8, &LocalProfile::compute(&r8).unwrap()).unwrap();
        assert_eq!(b.g, e(1));
    }

    #[test]
    fn structure_basis_refuses_intermediate_nilpotency() {
        let r = build_null_extension(2, 1, 3, CAP).unwrap();
        let p = LocalProfile::compute(&r).unwrap();
        assert!(matches!(StructureBasis::find(&r, &p), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn digit_expansion_is_a_bijection() {
        for spec in ["zn:27", "zn:16", "zn:25", "polyquot:field:2,2;f=x^2", "polyquot:zn:4;f=x^2+2", "field:2,3"] {
            let r = crate::builders::parse_ring_spec(spec).unwrap().build(CAP).unwrap();
            let p = LocalProfile::compute(&r).unwrap();
            let b = StructureBasis::find(&r, &p).unwrap();
            let mut hit = vec![false; r.order()];
            for a in r.elements() {
                let d = b.coordinates(&r, &p, a).unwrap();
                assert!(d.iter().all(|x| b.digit_set.contains(x)));
                assert_eq!(b.evaluate(&r, &d), a, "{spec}");
                hit[a.index()] = true;
            }
            assert!(hit.into_iter().all(|h| h));
            // residues of g^0..g^{q-2} are distinct
            for k in 1..b.digit_set.len() {
                for l in 1..b.digit_set.len() {
                    let diff = r.sub(b.digit_set[k], b.digit_set[l]);
                    assert_eq!(p.in_power(diff, 1), k == l, "{spec}");
                }
            }
        }
    }
}
