//! The product matrix `A_u(R)` and the element orderings used to display it.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::charpoly::{self, IntMatrix};
use crate::error::{Error, Result};
use crate::local::LocalProfile;
use crate::poly::IntPoly;
use crate::ring::{ElementId, FiniteRing};

/// Square 0/1 matrix with rows packed into 64-bit words, bit `j % 64` of word `j / 64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix { n, words, data: vec![0; n * words] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.data[i * self.words + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(i).iter().enumerate().flat_map(|(w, &bits)| {
            let mut b = bits;
            core::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let t = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(w * 64 + t)
            })
        })
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.row_words(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.row_ones(i).all(|j| self.get(j, i)))
    }

    pub fn trace(&self) -> usize {
        (0..self.n).filter(|&i| self.get(i, i)).count()
    }

    /// `out[i][j] = self[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut inv = vec![0usize; self.n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let mut m = Self::zeros(self.n);
        for (i, &p) in perm.iter().enumerate() {
            for j in self.row_ones(p) {
                m.set(i, inv[j], true);
            }
        }
        m
    }

    /// Principal submatrix on `idx` (in that order).
    pub fn principal(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, |i, j| self.get(i, j) as i64)
    }

    /// One row per line, `0`/`1` characters without separators.
    pub fn to_text_grid(&self) -> String {
        let mut s = String::with_capacity(self.n * (self.n + 1));
        for i in 0..self.n {
            for j in 0..self.n {
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    /// Each row as hex digits, column 0 in the most significant bit of the first digit.
    pub fn to_hex_rows(&self) -> Vec<String> {
        const HEX: &[u8; 16] = b"0123456789abcdef";
        (0..self.n)
            .map(|i| {
                (0..self.n.div_ceil(4))
                    .map(|d| {
                        let mut v = 0;
                        for b in 0..4 {
                            let j = d * 4 + b;
                            if j < self.n && self.get(i, j) {
                                v |= 8 >> b;
                            }
                        }
                        HEX[v] as char
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_hex_rows(n: usize, rows: &[String]) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::InvalidInput("row count does not match n".into()));
        }
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n.div_ceil(4) {
                return Err(Error::Parse { pos: i, msg: "hex row has the wrong length".into() });
            }
            for (d, c) in row.chars().enumerate() {
                let v = c.to_digit(16).ok_or(Error::Parse { pos: i, msg: "invalid hex digit".into() })?;
                for b in 0..4 {
                    let j = d * 4 + b;
                    if v & (8 >> b) != 0 {
                        if j >= n {
                            return Err(Error::Parse { pos: i, msg: "padding bits must be zero".into() });
                        }
                        m.set(i, j, true);
                    }
                }
            }
        }
        Ok(m)
    }

    /// Connected components of the graph with an edge `i–j` whenever entry `(i,j)`
    /// or `(j,i)` is set. Returns `(components with an edge, isolated vertices)`;
    /// each component is sorted ascending.
    pub fn components(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let n = self.n;
        let symmetric = self.is_symmetric();
        let mut adj: Vec<Vec<usize>> = Vec::new();
        if !symmetric {
            adj = vec![Vec::new(); n];
            for i in 0..n {
                for j in self.row_ones(i) {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        let mut isolated = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut k = 0;
            while k < comp.len() {
                let v = comp[k];
                k += 1;
                let mut visit = |w: usize| {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                };
                if symmetric {
                    for w in self.row_ones(v) {
                        visit(w);
                    }
                } else {
                    for &w in &adj[v] {
                        visit(w);
                    }
                }
            }
            if comp.len() == 1 && !self.get(start, start) {
                isolated.push(start);
            } else {
                comp.sort_unstable();
                comps.push(comp);
            }
        }
        (comps, isolated)
    }
}

/// Named element orderings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrderingTag {
    /// Constructor order.
    Natural,
    /// Units, then each stratum `J^i \ J^{i+1}` in turn, then 0.
    ZeroBlock,
    /// Non-units, square roots of `u`, then pairs `(s, s⁻¹u)`.
    UnitPairing,
    /// Rows without solutions, then classes of equal row support, each class
    /// followed by its partner class.
    StratumPairing,
    /// The block layout for rings with `J² = 0`.
    J2Block,
    /// A caller-supplied permutation.
    Explicit,
}

impl OrderingTag {
    pub const ALL: [OrderingTag; 5] =
        [OrderingTag::Natural, OrderingTag::ZeroBlock, OrderingTag::UnitPairing, OrderingTag::StratumPairing, OrderingTag::J2Block];

    pub fn as_str(self) -> &'static str {
        match self {
            OrderingTag::Natural => "natural",
            OrderingTag::ZeroBlock => "zero_block",
            OrderingTag::UnitPairing => "unit_pairing",
            OrderingTag::StratumPairing => "stratum_pairing",
            OrderingTag::J2Block => "j2_block",
            OrderingTag::Explicit => "explicit",
        }
    }
}

impl fmt::Display for OrderingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OrderingTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [OrderingTag::Explicit]
            .into_iter()
            .chain(OrderingTag::ALL)
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(alloc::format!("unknown ordering `{s}`")))
    }
}

/// A permutation `position -> element` together with the tag that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderingPlan {
    tag: OrderingTag,
    u: Option<ElementId>,
    perm: Vec<ElementId>,
}

impl OrderingPlan {
    pub fn natural(order: usize) -> Self {
        OrderingPlan { tag: OrderingTag::Natural, u: None, perm: (0..order).map(|i| ElementId(i as u16)).collect() }
    }

    /// Wraps an arbitrary permutation; fails unless it is a bijection on `[0, order)`.
    pub fn explicit(order: usize, perm: Vec<ElementId>) -> Result<Self> {
        Self::checked(OrderingTag::Explicit, None, order, perm)
    }

    fn checked(tag: OrderingTag, u: Option<ElementId>, order: usize, perm: Vec<ElementId>) -> Result<Self> {
        let mut seen = vec![false; order];
        if perm.len() != order {
            return Err(Error::Plan(alloc::format!("{tag} ordering lists {} of {order} elements", perm.len())));
        }
        for e in &perm {
            match seen.get_mut(e.index()) {
                Some(s) if !*s => *s = true,
                _ => return Err(Error::Plan(alloc::format!("{tag} ordering is not a bijection"))),
            }
        }
        Ok(OrderingPlan { tag, u, perm })
    }

    pub fn tag(&self) -> OrderingTag {
        self.tag
    }

    /// The element the plan was built for, when the layout depends on it.
    pub fn target(&self) -> Option<ElementId> {
        self.u
    }

    pub fn permutation(&self) -> &[ElementId] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Builds the layout for `tag`; every group is listed by ascending element index.
    pub fn make(ring: &FiniteRing, u: ElementId, tag: OrderingTag) -> Result<Self> {
        ring.element(u.index())?;
        let n = ring.order();
        let profile = || LocalProfile::compute(ring).map_err(|_| Error::Hypothesis(alloc::format!("{tag} ordering needs a local ring")));
        let perm = match tag {
            OrderingTag::Natural => return Ok(Self::natural(n)),
            OrderingTag::Explicit => return Err(Error::Plan("explicit orderings are supplied by the caller".into())),
            OrderingTag::ZeroBlock => {
                let p = profile()?;
                let mut v: Vec<ElementId> = ring.elements().collect();
                v.sort_by_key(|&a| (p.depth(a), a));
                v
            }
            OrderingTag::UnitPairing => unit_pairing(ring, u)?,
            OrderingTag::StratumPairing => {
                let p = profile()?;
                if !p.is_maximal() {
                    return Err(Error::Hypothesis("stratum_pairing needs maximal nilpotency index".into()));
                }
                if u == ring.zero() || ring.is_unit(u) {
                    return Err(Error::Hypothesis("stratum_pairing needs a nonzero non-unit u".into()));
                }
                support_pairing(ring, u)
            }
            OrderingTag::J2Block => {
                let p = profile()?;
                if !p.radical_squares_to_zero() {
                    return Err(Error::Hypothesis("j2_block needs J² = 0".into()));
                }
                j2_block(ring, &p, u)?
            }
        };
        Self::checked(tag, Some(u), n, perm)
    }

    /// The layout matching the theorem that covers `(R, u)`, or natural when none does.
    pub fn proof(ring: &FiniteRing, u: ElementId) -> Result<Self> {
        let tag = match LocalProfile::compute(ring) {
            Err(_) => OrderingTag::Natural,
            Ok(p) if p.radical_squares_to_zero() => OrderingTag::J2Block,
            Ok(_) if ring.is_unit(u) => OrderingTag::UnitPairing,
            Ok(p) if u == ring.zero() && p.is_maximal() => OrderingTag::ZeroBlock,
            Ok(p) if p.is_maximal() => OrderingTag::StratumPairing,
            Ok(_) => OrderingTag::Natural,
        };
        Self::make(ring, u, tag)
    }
}

fn unit_pairing(ring: &FiniteRing, u: ElementId) -> Result<Vec<ElementId>> {
    if !ring.is_unit(u) {
        return Err(Error::Hypothesis("unit_pairing needs u to be a unit".into()));
    }
    let mut v = ring.non_units();
    let roots = ring.square_roots(u);
    v.extend(roots.iter().copied());
    let mut used = vec![false; ring.order()];
    for &r in &roots {
        used[r.index()] = true;
    }
    for s in ring.units() {
        if used[s.index()] {
            continue;
        }
        let t = ring.mul(ring.inverse(s)?, u);
        used[s.index()] = true;
        used[t.index()] = true;
        v.push(s);
        v.push(t);
    }
    Ok(v)
}

/// Zero rows, then row-support classes by (stratum, least element), each followed by its partner.
fn support_pairing(ring: &FiniteRing, u: ElementId) -> Vec<ElementId> {
    let n = ring.order();
    let mut supports: BTreeMap<Vec<u16>, Vec<ElementId>> = BTreeMap::new();
    let mut zero_rows = Vec::new();
    let mut support_of = vec![Vec::new(); n];
    for s in ring.elements() {
        let row = ring.mul_row(s);
        let t: Vec<u16> = (0..n as u16).filter(|&t| row[t as usize] == u.0).collect();
        if t.is_empty() {
            zero_rows.push(s);
        } else {
            supports.entry(t.clone()).or_default().push(s);
            support_of[s.index()] = t;
        }
    }
    let profile = LocalProfile::compute(ring).ok();
    let mut classes: Vec<&Vec<ElementId>> = supports.values().collect();
    classes.sort_by_key(|c| (profile.as_ref().map_or(0, |p| p.depth(c[0])), c[0]));
    let mut out = zero_rows;
    let mut used = vec![false; n];
    for e in &out {
        used[e.index()] = true;
    }
    for class in classes {
        if used[class[0].index()] {
            continue;
        }
        for &s in class {
            used[s.index()] = true;
            out.push(s);
        }
        for &t in &support_of[class[0].index()] {
            if !used[t as usize] {
                used[t as usize] = true;
                out.push(ElementId(t));
            }
        }
    }
    out.extend(ring.elements().filter(|e| !used[e.index()]));
    out
}

fn j2_block(ring: &FiniteRing, p: &LocalProfile, u: ElementId) -> Result<Vec<ElementId>> {
    if u == ring.zero() {
        let mut v = ring.units();
        v.extend(ring.non_units().into_iter().filter(|&a| a != ring.zero()));
        v.push(ring.zero());
        return Ok(v);
    }
    if ring.is_unit(u) {
        return unit_pairing(ring, u);
    }
    // unit cosets s + J, each listed by its least element; then s⁻¹u per coset; then the rest
    let radical = ring.non_units();
    let mut used = vec![false; ring.order()];
    let mut out = Vec::new();
    let mut reps = Vec::new();
    for s in ring.units() {
        if used[s.index()] {
            continue;
        }
        let mut coset: Vec<ElementId> = radical.iter().map(|&j| ring.add(s, j)).collect();
        coset.sort_unstable();
        for &c in &coset {
            used[c.index()] = true;
        }
        reps.push(s);
        out.extend(coset);
    }
    for s in reps {
        let t = ring.mul(ring.inverse(s)?, u);
        if !used[t.index()] {
            used[t.index()] = true;
            out.push(t);
        }
    }
    debug_assert!(p.radical_squares_to_zero());
    out.extend(ring.elements().filter(|e| !used[e.index()]));
    Ok(out)
}

/// `A_u(R)` under an ordering: entry `(i, j)` is 1 iff `x_i x_j = u` where `x = ordering`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductMatrix {
    bits: BitMatrix,
    ordering: OrderingPlan,
    u: ElementId,
}

impl ProductMatrix {
    pub fn build(ring: &FiniteRing, u: ElementId, plan: OrderingPlan) -> Result<Self> {
        ring.element(u.index())?;
        if plan.len() != ring.order() {
            return Err(Error::Plan(alloc::format!("plan has {} positions, ring has {} elements", plan.len(), ring.order())));
        }
        if let Some(target) = plan.target() {
            if target != u {
                return Err(Error::Plan(alloc::format!("{} plan was built for another element", plan.tag())));
            }
        }
        let perm = plan.permutation();
        let n = ring.order();
        let mut pos = vec![0usize; n];
        for (i, e) in perm.iter().enumerate() {
            pos[e.index()] = i;
        }
        let mut bits = BitMatrix::zeros(n);
        for (i, &x) in perm.iter().enumerate() {
            let row = ring.mul_row(x);
            for (y, &prod) in row.iter().enumerate() {
                if prod == u.0 {
                    bits.set(i, pos[y], true);
                }
            }
        }
        Ok(ProductMatrix { bits, ordering: plan, u })
    }

    pub fn natural(ring: &FiniteRing, u: ElementId) -> Result<Self> {
        Self::build(ring, u, OrderingPlan::natural(ring.order()))
    }

    pub fn with_tag(ring: &FiniteRing, u: ElementId, tag: OrderingTag) -> Result<Self> {
        Self::build(ring, u, OrderingPlan::make(ring, u, tag)?)
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn ordering(&self) -> &OrderingPlan {
        &self.ordering
    }

    pub fn u(&self) -> ElementId {
        self.u
    }

    pub fn size(&self) -> usize {
        self.bits.size()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits.get(i, j)
    }

    pub fn trace(&self) -> usize {
        self.bits.trace()
    }

    /// Per-row popcounts, in ordering order.
    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.size()).map(|i| self.bits.row_sum(i)).collect()
    }

    pub fn rank(&self) -> usize {
        charpoly::rank_exact(&self.bits)
    }

    pub fn charpoly_dense(&self) -> Result<IntPoly> {
        charpoly::charpoly_dense_split(&self.bits)
    }

    pub fn charpoly_lowrank(&self) -> Result<IntPoly> {
        charpoly::charpoly_lowrank(&self.bits)
    }

    /// Element labels along the ordering.
    pub fn labels<'a>(&self, ring: &'a FiniteRing) -> Vec<&'a str> {
        self.ordering.permutation().iter().map(|&e| ring.label(e)).collect()
    }
}
