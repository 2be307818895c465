//! Exact characteristic polynomials `det(A - λI)`.
//!
//! * [`charpoly_dense`]: Hessenberg reduction modulo word-sized primes,
//!   recombined by CRT past a proven coefficient bound.
//! * [`charpoly_berkowitz`]: division-free, over any commutative ring; the
//!   small-size oracle.
//! * [`charpoly_lowrank`]: for symmetric 0/1 matrices, the compression of `A`
//!   to its column space, exact over the rationals.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::modular::{charpoly_monic_mod_p, Crt, PrimeStream};
use crate::poly::IntPoly;

/// Dense square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    /// Fails unless every row has exactly `rows.len()` entries.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        Ok(IntMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        IntMatrix { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| (i == j) as i64)
    }

    pub fn all_ones(n: usize) -> Self {
        Self::from_fn(n, |_, _| 1)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| BigInt::from(self.get(i, i))).sum()
    }

    /// `out[i][j] = self[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self::from_fn(self.n, |i, j| self.get(perm[i], perm[j]))
    }

    pub fn determinant(&self) -> BigInt {
        determinant_bareiss(self.big_rows())
    }

    pub fn charpoly_berkowitz(&self) -> IntPoly {
        IntPoly::new(charpoly_berkowitz(&self.big_rows()))
    }

    fn big_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()
    }
}

/// `det(A - λI)` ascending, division-free, `O(n⁴)` ring operations.
pub fn charpoly_berkowitz<T>(m: &[Vec<T>]) -> Vec<T>
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    let n = m.len();
    // monic det(λI - A_r), descending, for the leading r×r block
    let mut p: Vec<T> = vec![T::one()];
    for r in 0..n {
        let mut t = Vec::with_capacity(r + 2);
        t.push(T::one());
        t.push(-m[r][r].clone());
        let mut x: Vec<T> = (0..r).map(|i| m[i][r].clone()).collect();
        for k in 0..r {
            let dot = (0..r).fold(T::zero(), |acc, j| acc + m[r][j].clone() * x[j].clone());
            t.push(-dot);
            if k + 1 < r {
                x = (0..r).map(|i| (0..r).fold(T::zero(), |acc, j| acc + m[i][j].clone() * x[j].clone())).collect();
            }
        }
        let mut next = vec![T::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, pj) in p.iter().enumerate().take(i + 1) {
                *slot = slot.clone() + t[i - j].clone() * pj.clone();
            }
        }
        p = next;
    }
    p.reverse();
    if n % 2 == 1 {
        p = p.into_iter().map(|c| -c).collect();
    }
    p
}

/// Fraction-free elimination; exact.
pub fn determinant_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if piv != k {
            m.swap(piv, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn bits_of(x: &BigUint) -> u64 {
    x.bits()
}

/// Runs the multimodular loop until the product of primes exceeds `2^(bound_bits + 1)`,
/// then checks one extra prime.
fn multimodular(residues: impl Fn(u64) -> Vec<u64>, n: usize, bound_bits: u64) -> Result<Vec<BigInt>> {
    let mut crt = Crt::new(n + 1);
    let mut primes = PrimeStream::new();
    while bits_of(&crt.modulus) <= bound_bits + 1 {
        let p = primes.next().ok_or_else(|| Error::Internal("ran out of primes".into()))?;
        crt.push(&residues(p), p);
    }
    let values = crt.symmetric();
    let p = primes.next().ok_or_else(|| Error::Internal("ran out of primes".into()))?;
    let check = residues(p);
    let pi = BigInt::from(p);
    for (v, &r) in values.iter().zip(&check) {
        let m = ((v % &pi) + &pi) % &pi;
        if m != BigInt::from(r) {
            return Err(Error::Internal("multimodular charpoly failed its check prime".into()));
        }
    }
    Ok(values)
}

/// Monic ascending `det(λI - A)` → `det(A - λI)`.
fn to_det_a_minus_lambda(monic: Vec<BigInt>) -> IntPoly {
    let n = monic.len() - 1;
    let p = IntPoly::new(monic);
    if n % 2 == 1 {
        -p
    } else {
        p
    }
}

/// `log2` upper bound for every coefficient of the characteristic polynomial:
/// each is a sum of principal minors, each minor is at most the product of its
/// row norms (Hadamard), so all are below `Π (1 + ‖row_i‖)`.
fn hadamard_bits(m: &IntMatrix) -> u64 {
    let mut prod = BigUint::one();
    for i in 0..m.n {
        let sq: BigUint = (0..m.n).map(|j| BigUint::from(m.get(i, j).unsigned_abs()).pow(2)).sum();
        let root = sq.sqrt() + 1u32;
        prod *= root + 1u32;
    }
    bits_of(&prod)
}

/// Exact `det(M - λI)` for an integer matrix.
pub fn charpoly_dense(m: &IntMatrix) -> Result<IntPoly> {
    let n = m.n;
    if n == 0 {
        return Ok(IntPoly::one());
    }
    let bound = hadamard_bits(m);
    let residues = |p: u64| {
        let a = m.data.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect();
        charpoly_monic_mod_p(a, n, p)
    };
    let monic = multimodular(residues, n, bound)?;
    Ok(to_det_a_minus_lambda(monic))
}

/// Monic `det(λI - A_c)` for the principal block `comp` of a symmetric 0/1 matrix of rank `rank`.
fn dense_block(a: &BitMatrix, comp: &[usize], rank: usize) -> Result<Vec<BigInt>> {
    let s = comp.len();
    let ones: usize = comp.iter().map(|&i| comp.iter().filter(|&&j| a.get(i, j)).count()).sum();
    // |e_k(λ)| ≤ C(r,k) (Σλ²/r)^{k/2} for the r nonzero eigenvalues, summing to (1 + √(S/r))^r
    let r = rank.max(1);
    let t = BigUint::from(ones.div_ceil(r)).sqrt() + 1u32;
    let symmetric_bound = bits_of(&(t + 1u32).pow(r as u32));
    let block = IntMatrix::from_fn(s, |i, j| a.get(comp[i], comp[j]) as i64);
    let bound = symmetric_bound.min(hadamard_bits(&block));
    let residues = |p: u64| {
        let v = block.data.iter().map(|&x| x as u64 % p).collect();
        charpoly_monic_mod_p(v, s, p)
    };
    multimodular(residues, s, bound)
}

/// Dense path for a symmetric 0/1 matrix, one connected block at a time.
pub fn charpoly_dense_split(a: &BitMatrix) -> Result<IntPoly> {
    if !a.is_symmetric() {
        return charpoly_dense(&a.to_int_matrix());
    }
    let (comps, isolated) = a.components();
    let mut factors = Vec::new();
    for comp in &comps {
        let r = block_rank(a, comp).rank;
        factors.push(IntPoly::new(dense_block(a, comp, r)?));
    }
    Ok(assemble(a.size(), factors, isolated.len()))
}

/// `(-1)^N λ^{isolated} Π monic blocks`, grouping repeated blocks into powers.
fn assemble(n: usize, blocks: Vec<IntPoly>, isolated: usize) -> IntPoly {
    let mut groups: BTreeMap<Vec<BigInt>, u64> = BTreeMap::new();
    for b in blocks {
        *groups.entry(b.into_coeffs()).or_default() += 1;
    }
    let parts = groups.into_iter().map(|(c, m)| IntPoly::new(c).pow(m));
    let monic = IntPoly::product(parts).shift(isolated);
    if n % 2 == 1 {
        -monic
    } else {
        monic
    }
}

/// Rank data of a symmetric 0/1 block: pivot rows and columns in local block indices.
struct BlockRank {
    rank: usize,
    pivot_rows: Vec<usize>,
    pivot_cols: Vec<usize>,
    /// One local index per distinct row.
    distinct_rows: Vec<usize>,
}

fn block_rank(a: &BitMatrix, comp: &[usize]) -> BlockRank {
    let s = comp.len();
    let mut by_row: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
    for li in 0..s {
        let key: Vec<bool> = comp.iter().map(|&j| a.get(comp[li], j)).collect();
        by_row.entry(key).or_insert(li);
    }
    let mut reps: Vec<usize> = by_row.into_values().collect();
    reps.sort_unstable();
    // duplicated rows are duplicated columns by symmetry, so the rank is that of W = A[reps, reps]
    let k = reps.len();
    let mut w: Vec<Vec<BigInt>> =
        reps.iter().map(|&i| reps.iter().map(|&j| BigInt::from(a.get(comp[i], comp[j]) as u8)).collect()).collect();
    let mut row_ids: Vec<usize> = (0..k).collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..k {
        let Some(piv) = (rank..k).find(|&i| !w[i][col].is_zero()) else {
            continue;
        };
        w.swap(rank, piv);
        row_ids.swap(rank, piv);
        for i in rank + 1..k {
            for j in col + 1..k {
                let v = (&w[rank][col] * &w[i][j] - &w[i][col] * &w[rank][j]) / &prev;
                w[i][j] = v;
            }
            w[i][col] = BigInt::zero();
        }
        prev = w[rank][col].clone();
        pivots.push((row_ids[rank], col));
        rank += 1;
    }
    BlockRank {
        rank,
        pivot_rows: pivots.iter().map(|&(r, _)| reps[r]).collect(),
        pivot_cols: pivots.iter().map(|&(_, c)| reps[c]).collect(),
        distinct_rows: reps,
    }
}

/// Exact rank over the rationals.
pub fn rank_exact(a: &BitMatrix) -> usize {
    if !a.is_symmetric() {
        let m = a.to_int_matrix();
        return rank_general(&m);
    }
    let (comps, _) = a.components();
    comps.iter().map(|c| block_rank(a, c).rank).sum()
}

fn rank_general(m: &IntMatrix) -> usize {
    let n = m.n;
    let mut w: Vec<Vec<BigInt>> = m.big_rows();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..n).find(|&i| !w[i][col].is_zero()) else {
            continue;
        };
        w.swap(rank, piv);
        for i in rank + 1..n {
            for j in col + 1..n {
                let v = (&w[rank][col] * &w[i][j] - &w[i][col] * &w[rank][j]) / &prev;
                w[i][j] = v;
            }
            w[i][col] = BigInt::zero();
        }
        prev = w[rank][col].clone();
        rank += 1;
    }
    rank
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Solves `L X = R` for invertible `L` (r×r) and `R` (r×c) over the rationals.
fn solve_rational(mut l: Vec<Vec<BigRational>>, mut rhs: Vec<Vec<BigRational>>) -> Result<Vec<Vec<BigRational>>> {
    let r = l.len();
    for col in 0..r {
        let piv = (col..r).find(|&i| !l[i][col].is_zero()).ok_or_else(|| Error::Internal("singular pivot block".into()))?;
        l.swap(col, piv);
        rhs.swap(col, piv);
        let inv = l[col][col].recip();
        for v in l[col].iter_mut() {
            *v = &*v * &inv;
        }
        for v in rhs[col].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..r {
            if i == col || l[i][col].is_zero() {
                continue;
            }
            let f = l[i][col].clone();
            for j in 0..r {
                let t = &f * &l[col][j];
                l[i][j] -= t;
            }
            for j in 0..rhs[i].len() {
                let t = &f * &rhs[col][j];
                rhs[i][j] -= t;
            }
        }
    }
    Ok(rhs)
}

/// Monic `det(λI - M)` over the rationals by Hessenberg reduction, ascending.
fn charpoly_rational(mut a: Vec<Vec<BigRational>>) -> Vec<BigRational> {
    let n = a.len();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| !a[i][j].is_zero()) else {
            continue;
        };
        if piv != j + 1 {
            a.swap(piv, j + 1);
            for row in a.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = a[j + 1][j].recip();
        for k in j + 2..n {
            if a[k][j].is_zero() {
                continue;
            }
            let f = &a[k][j] * &inv;
            for c in j..n {
                let t = &f * &a[j + 1][c];
                a[k][c] -= t;
            }
            for row in a.iter_mut() {
                let t = &f * &row[k];
                row[j + 1] += t;
            }
        }
    }
    let mut polys: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
    for m in 1..=n {
        let mut cur = vec![BigRational::zero(); m + 1];
        for (i, c) in polys[m - 1].iter().enumerate() {
            cur[i + 1] += c;
            cur[i] -= &a[m - 1][m - 1] * c;
        }
        let mut t = BigRational::one();
        for i in (1..m).rev() {
            t = &t * &a[i][i - 1];
            if t.is_zero() {
                break;
            }
            let coef = &a[i - 1][m - 1] * &t;
            if coef.is_zero() {
                continue;
            }
            for (d, c) in polys[i - 1].iter().enumerate() {
                cur[d] -= &coef * c;
            }
        }
        polys.push(cur);
    }
    polys.pop().unwrap()
}

/// Monic `det(λI - A_c)` via the compression `M = B_P⁻¹ (AB)_P` on the column space.
fn lowrank_block(a: &BitMatrix, comp: &[usize]) -> Result<Vec<BigInt>> {
    let s = comp.len();
    let br = block_rank(a, comp);
    let r = br.rank;
    let at = |i: usize, j: usize| a.get(comp[i], comp[j]);
    // (AB)[i][c] = <row_i, column pivot_cols[c]> = <row_i, row pivot_cols[c]>
    let ab = |i: usize, c: usize| -> i64 { (0..s).filter(|&t| at(i, t) && at(br.pivot_cols[c], t)).count() as i64 };
    let bp: Vec<Vec<BigRational>> =
        br.pivot_rows.iter().map(|&i| br.pivot_cols.iter().map(|&c| rat(at(i, c) as i64)).collect()).collect();
    let abp: Vec<Vec<BigRational>> = br.pivot_rows.iter().map(|&i| (0..r).map(|c| rat(ab(i, c))).collect()).collect();
    let m = solve_rational(bp, abp)?;
    // B M = A B on every distinct row (other rows repeat them)
    for &i in &br.distinct_rows {
        for c in 0..r {
            let lhs: BigRational = (0..r).filter(|&d| at(i, br.pivot_cols[d])).map(|d| m[d][c].clone()).sum();
            if lhs != rat(ab(i, c)) {
                return Err(Error::Internal("compression does not represent A on its column space".into()));
            }
        }
    }
    let poly = charpoly_rational(m);
    let mut out = vec![BigInt::zero(); s - r];
    for c in poly {
        if !c.is_integer() {
            return Err(Error::Internal("compressed characteristic polynomial is not integral".into()));
        }
        out.push(c.to_integer());
    }
    Ok(out)
}

/// Exact `det(A - λI)` for a symmetric 0/1 matrix via its column space.
///
/// Nonzero-eigenvalue eigenvectors of a symmetric matrix lie in its column
/// space, so `A ≅ M ⊕ 0` with `M` the action on a basis of columns.
pub fn charpoly_lowrank(a: &BitMatrix) -> Result<IntPoly> {
    if !a.is_symmetric() {
        return Err(Error::Unsupported("low-rank path needs a symmetric matrix".into()));
    }
    let (comps, isolated) = a.components();
    let mut blocks = Vec::with_capacity(comps.len());
    for comp in &comps {
        blocks.push(IntPoly::new(lowrank_block(a, comp)?));
    }
    Ok(assemble(a.size(), blocks, isolated.len()))
}

/// Both sides of `det(M) = det(A) det(D - C A⁻¹ B)` for `M = [[A, B], [C, D]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchurCheck {
    pub lhs: BigRational,
    pub rhs: BigRational,
}

fn rect_dims(m: &[Vec<i64>]) -> Result<(usize, usize)> {
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput("ragged block".into()));
    }
    Ok((m.len(), cols))
}

fn rational_det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= &m[col][col];
        let inv = m[col][col].recip();
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] * &inv;
            for j in col..n {
                let t = &f * &m[col][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Evaluates both sides exactly and fails unless they agree.
pub fn schur_det_reduce(a: &[Vec<i64>], b: &[Vec<i64>], c: &[Vec<i64>], d: &[Vec<i64>]) -> Result<SchurCheck> {
    let (an, am) = rect_dims(a)?;
    let (bn, bm) = rect_dims(b)?;
    let (cn, cm) = rect_dims(c)?;
    let (dn, dm) = rect_dims(d)?;
    if an != am || dn != dm || bn != an || bm != dm || cn != dn || cm != an {
        return Err(Error::InvalidInput("blocks are not conformal".into()));
    }
    let full: Vec<Vec<BigInt>> = (0..an + dn)
        .map(|i| {
            (0..an + dn)
                .map(|j| {
                    BigInt::from(match (i < an, j < an) {
                        (true, true) => a[i][j],
                        (true, false) => b[i][j - an],
                        (false, true) => c[i - an][j],
                        (false, false) => d[i - an][j - an],
                    })
                })
                .collect()
        })
        .collect();
    let lhs = BigRational::from_integer(determinant_bareiss(full));
    let ra: Vec<Vec<BigRational>> = a.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
    let det_a = rational_det(ra.clone());
    if det_a.is_zero() {
        return Err(Error::Hypothesis("Schur reduction needs an invertible top-left block".into()));
    }
    let rb: Vec<Vec<BigRational>> = b.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
    let ainv_b = solve_rational(ra, rb)?;
    let schur: Vec<Vec<BigRational>> = (0..dn)
        .map(|i| {
            (0..dn)
                .map(|j| {
                    let cab: BigRational = (0..an).map(|k| rat(c[i][k]) * &ainv_b[k][j]).sum();
                    rat(d[i][j]) - cab
                })
                .collect()
        })
        .collect();
    let rhs = det_a * rational_det(schur);
    if lhs != rhs {
        return Err(Error::Internal("Schur identity failed".into()));
    }
    Ok(SchurCheck { lhs, rhs })
}

/// `C_{i,j} = [[0_i, F_{i,j}], [F_{j,i}, 0_j]]` with `F` all-ones.
pub fn bipartite_block(i: usize, j: usize) -> IntMatrix {
    IntMatrix::from_fn(i + j, |a, b| ((a < i) != (b < i)) as i64)
}

/// `det(C_{i,j} - λI)` through the Schur complement of `-λI_i`:
/// it equals `(-1)^i λ^{i-j} det(F_{j,i}F_{i,j} - λ²I_j)` for `i ≥ j`.
/// The identity is checked at a few integer points.
pub fn bipartite_block_charpoly(i: usize, j: usize) -> Result<IntPoly> {
    if i == 0 || j == 0 {
        return Err(Error::InvalidInput("bipartite block needs two nonempty sides".into()));
    }
    let (i, j) = if i >= j { (i, j) } else { (j, i) };
    // F_{j,i} F_{i,j} computed entrywise
    let prod: Vec<Vec<BigInt>> = (0..j).map(|_| (0..j).map(|_| BigInt::from(i)).collect()).collect();
    let g = IntPoly::new(charpoly_berkowitz(&prod)).compose_power(2).shift(i - j);
    let p = if i % 2 == 1 { -g } else { g };
    for lam in 1..=3i64 {
        let a: Vec<Vec<i64>> = (0..i).map(|r| (0..i).map(|c| if r == c { -lam } else { 0 }).collect()).collect();
        let b = vec![vec![1; j]; i];
        let c = vec![vec![1; i]; j];
        let d: Vec<Vec<i64>> = (0..j).map(|r| (0..j).map(|c| if r == c { -lam } else { 0 }).collect()).collect();
        let check = schur_det_reduce(&a, &b, &c, &d)?;
        if BigRational::from_integer(p.eval(&BigInt::from(lam))) != check.lhs {
            return Err(Error::Internal("bipartite block polynomial disagrees with its determinant".into()));
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_zn;
    use crate::matrix::ProductMatrix;
    use crate::ring::{ElementId, DEFAULT_ORDER_CAP as CAP};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn swap_matrix() {
        let m = IntMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(charpoly_dense(&m).unwrap(), p(&[-1, 0, 1]));
        assert_eq!(m.charpoly_berkowitz(), p(&[-1, 0, 1]));
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(IntMatrix::from_rows(vec![vec![1, 2], vec![3]]).is_err());
        assert!(IntMatrix::from_rows(vec![vec![1, 2]]).is_err());
    }

    #[test]
    fn all_ones_matrix() {
        for k in 1..6usize {
            let expected = (p(&[0, -1]).pow(k as u64 - 1)) * p(&[k as i64, -1]);
            assert_eq!(charpoly_dense(&IntMatrix::all_ones(k)).unwrap(), expected);
            let bits = BitMatrix::from_fn(k, |_, _| true);
            assert_eq!(charpoly_lowrank(&bits).unwrap(), expected);
        }
    }

    #[test]
    fn a0_of_z9() {
        let r = build_zn(9, CAP).unwrap();
        let a = ProductMatrix::natural(&r, ElementId(0)).unwrap();
        let expected = -(p(&[0, 1]).pow(6) * p(&[12, -6, -3, 1]));
        assert_eq!(a.charpoly_dense().unwrap(), expected);
        assert_eq!(a.charpoly_lowrank().unwrap(), expected);
        assert_eq!(charpoly_dense(&a.bits().to_int_matrix()).unwrap(), expected);
    }

    #[test]
    fn z27_u9_lowrank() {
        let r = build_zn(27, CAP).unwrap();
        let a = ProductMatrix::natural(&r, ElementId(9)).unwrap();
        let expected = -(p(&[0, 1]).pow(21) * p(&[3, 1]).pow(2) * p(&[-3, 1]).pow(4));
        assert_eq!(a.charpoly_lowrank().unwrap(), expected);
        assert_eq!(a.charpoly_dense().unwrap(), expected);
    }

    #[test]
    fn z8_u1_lowrank() {
        let r = build_zn(8, CAP).unwrap();
        let a = ProductMatrix::natural(&r, ElementId(1)).unwrap();
        assert_eq!(a.charpoly_lowrank().unwrap(), p(&[0, 1]).pow(4) * p(&[-1, 1]).pow(4));
    }

    #[test]
    fn determinant_matches_constant_term() {
        let m = IntMatrix::from_rows(vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap();
        assert_eq!(m.determinant(), BigInt::from(4));
        assert_eq!(charpoly_dense(&m).unwrap().coeff(0), BigInt::from(4));
        assert_eq!(determinant_bareiss(vec![vec![BigInt::zero()]]), BigInt::zero());
    }

    #[test]
    fn asymmetric_lowrank_is_unsupported() {
        let m = BitMatrix::from_fn(3, |i, j| j == i + 1);
        assert!(matches!(charpoly_lowrank(&m), Err(Error::Unsupported(_))));
        assert_eq!(charpoly_dense_split(&m).unwrap(), p(&[0, 0, 0, -1]));
    }

    #[test]
    fn schur_blocks() {
        assert_eq!(bipartite_block_charpoly(1, 1).unwrap(), p(&[-1, 0, 1]));
        assert_eq!(bipartite_block_charpoly(3, 1).unwrap(), p(&[0, 0, -3, 0, 1]));
        assert_eq!(bipartite_block_charpoly(1, 3).unwrap(), p(&[0, 0, -3, 0, 1]));
        let mut c93 = vec![0i64; 13];
        c93[10] = -27;
        c93[12] = 1;
        assert_eq!(bipartite_block_charpoly(9, 3).unwrap(), p(&c93));
        assert_eq!(charpoly_dense(&bipartite_block(3, 1)).unwrap(), p(&[0, 0, -3, 0, 1]));
        let sing = schur_det_reduce(&[vec![0]], &[vec![1]], &[vec![1]], &[vec![0]]);
        assert!(matches!(sing, Err(Error::Hypothesis(_))));
        let ok = schur_det_reduce(&[vec![2]], &[vec![1]], &[vec![1]], &[vec![3]]).unwrap();
        assert_eq!(ok.lhs, rat(5));
    }

    #[test]
    fn exact_rank() {
        let r = build_zn(27, CAP).unwrap();
        assert_eq!(ProductMatrix::natural(&r, ElementId(0)).unwrap().rank(), 4);
        assert_eq!(rank_exact(&BitMatrix::from_fn(4, |i, j| i == j)), 4);
        assert_eq!(rank_exact(&BitMatrix::from_fn(3, |i, j| j == i + 1)), 2);
    }

    fn symmetric_bits(n: usize, seed: Vec<bool>) -> BitMatrix {
        let mut m = BitMatrix::zeros(n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                let v = seed[k % seed.len()];
                k += 1;
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        m
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dense_berkowitz_lowrank_agree(n in 1usize..9, seed in proptest::collection::vec(any::<bool>(), 1..40)) {
            let bits = symmetric_bits(n, seed);
            let m = bits.to_int_matrix();
            let dense = charpoly_dense(&m).unwrap();
            prop_assert_eq!(&dense, &m.charpoly_berkowitz());
            prop_assert_eq!(&dense, &charpoly_lowrank(&bits).unwrap());
            prop_assert_eq!(&dense, &charpoly_dense_split(&bits).unwrap());
            prop_assert_eq!(dense.coeff(0), m.determinant());
            let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            prop_assert_eq!(dense.coeff(n), sign.clone());
            prop_assert_eq!(dense.coeff(n - 1), -sign * m.trace());
        }

        #[test]
        fn integer_matrices(n in 1usize..6, entries in proptest::collection::vec(-9i64..9, 36)) {
            let m = IntMatrix::from_fn(n, |i, j| entries[i * 6 + j]);
            prop_assert_eq!(charpoly_dense(&m).unwrap(), m.charpoly_berkowitz());
        }

        #[test]
        fn permutation_invariance(n in 2usize..9, seed in proptest::collection::vec(any::<bool>(), 1..40), rot in 0usize..8) {
            let bits = symmetric_bits(n, seed);
            let perm: Vec<usize> = (0..n).map(|i| (i * 3 + rot) % n).collect();
            let mut seen = vec![false; n];
            let valid = perm.iter().all(|&x| !core::mem::replace(&mut seen[x], true));
            prop_assume!(valid);
            prop_assert_eq!(charpoly_lowrank(&bits).unwrap(), charpoly_lowrank(&bits.permuted(&perm)).unwrap());
        }
    }
}
