//! Word-sized modular arithmetic for the multimodular characteristic polynomial.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// Primes below 2^31, descending from the largest.
pub(crate) struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    pub(crate) fn new() -> Self {
        PrimeStream { next: (1u64 << 31) - 1 }
    }
}

/// Deterministic Miller-Rabin; bases 2, 7, 61 are exact below 4_759_123_141.
fn is_prime_u64(n: u64) -> bool {
    debug_assert!(n < 4_759_123_141);
    if n < 2 {
        return false;
    }
    for p in [2, 3, 5, 7, 61] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    [2u64, 7, 61].iter().all(|&a| {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            return true;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                return true;
            }
        }
        false
    })
}

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next > 2 {
            let c = self.next;
            self.next -= 1;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
        None
    }
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Monic `det(λI - A) mod p`, ascending, for a row-major `n×n` matrix of residues.
///
/// Reduces to upper Hessenberg form by similarity, then expands the
/// Hessenberg determinant recursively.
pub(crate) fn charpoly_monic_mod_p(mut a: Vec<u64>, n: usize, p: u64) -> Vec<u64> {
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| a[i * n + j] != 0) else {
            continue;
        };
        if piv != j + 1 {
            let (r1, r2) = (piv, j + 1);
            for c in 0..n {
                a.swap(r1 * n + c, r2 * n + c);
            }
            for r in 0..n {
                a.swap(r * n + r1, r * n + r2);
            }
        }
        let inv = invmod(a[(j + 1) * n + j], p);
        for k in j + 2..n {
            let f = mulmod(a[k * n + j], inv, p);
            if f == 0 {
                continue;
            }
            let nf = p - f;
            // row_k -= f * row_{j+1}
            for c in j..n {
                let t = a[(j + 1) * n + c];
                if t != 0 {
                    a[k * n + c] = (a[k * n + c] + nf * t) % p;
                }
            }
            // col_{j+1} += f * col_k
            for r in 0..n {
                let t = a[r * n + k];
                if t != 0 {
                    a[r * n + j + 1] = (a[r * n + j + 1] + f * t) % p;
                }
            }
        }
    }
    // polys[m] = det(λI - H[0..m, 0..m])
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![1]);
    for m in 1..=n {
        let h = |i: usize, j: usize| a[(i - 1) * n + (j - 1)];
        let prev = &polys[m - 1];
        let mut cur = vec![0u64; m + 1];
        let hmm = h(m, m);
        for (i, &c) in prev.iter().enumerate() {
            cur[i + 1] = (cur[i + 1] + c) % p;
            cur[i] = (cur[i] + (p - hmm) * c % p) % p;
        }
        let mut t = 1u64;
        for i in (1..m).rev() {
            t = mulmod(t, h(i + 1, i), p);
            if t == 0 {
                break;
            }
            let coef = mulmod(h(i, m), t, p);
            if coef == 0 {
                continue;
            }
            let nc = p - coef;
            for (d, &c) in polys[i - 1].iter().enumerate() {
                cur[d] = (cur[d] + nc * c) % p;
            }
        }
        polys.push(cur);
    }
    polys.pop().unwrap()
}

/// Incremental Chinese remaindering of a fixed-length residue vector.
pub(crate) struct Crt {
    pub(crate) modulus: BigUint,
    values: Vec<BigUint>,
}

impl Crt {
    pub(crate) fn new(len: usize) -> Self {
        Crt { modulus: BigUint::one(), values: vec![BigUint::zero(); len] }
    }

    pub(crate) fn push(&mut self, residues: &[u64], p: u64) {
        let m_mod_p = (&self.modulus % p).iter_u64_digits().next().unwrap_or(0);
        let inv = invmod(m_mod_p, p);
        for (v, &r) in self.values.iter_mut().zip(residues) {
            let v_mod_p = (&*v % p).iter_u64_digits().next().unwrap_or(0);
            let delta = mulmod((r + p - v_mod_p) % p, inv, p);
            if delta != 0 {
                *v += &self.modulus * delta;
            }
        }
        self.modulus *= p;
    }

    /// Representatives in `(-M/2, M/2]`.
    pub(crate) fn symmetric(&self) -> Vec<BigInt> {
        let half = &self.modulus >> 1;
        self.values
            .iter()
            .map(|v| if *v > half { BigInt::from(v.clone()) - BigInt::from(self.modulus.clone()) } else { BigInt::from(v.clone()) })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_descend() {
        let ps: Vec<u64> = PrimeStream::new().take(3).collect();
        assert_eq!(ps[0], 2147483647);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| is_prime_u64(p)));
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in (0..20_000).chain((1u64 << 31) - 2_000..1 << 31) {
            assert_eq!(is_prime_u64(n), trial(n), "{n}");
        }
        // strong pseudoprimes to single bases
        for n in [2047u64, 1_373_653, 25_326_001, 3_215_031_751] {
            assert!(!is_prime_u64(n));
        }
    }

    #[test]
    fn inverse_mod_p() {
        let p = 1_000_000_007;
        for a in [1u64, 2, 12345, p - 1] {
            assert_eq!(mulmod(a, invmod(a, p), p), 1);
        }
    }

    #[test]
    fn charpoly_of_small_matrices() {
        let p = 101;
        // [[0,1],[1,0]] -> λ^2 - 1
        assert_eq!(charpoly_monic_mod_p(vec![0, 1, 1, 0], 2, p), [100, 0, 1]);
        // companion-like 3x3 needing a pivot swap
        let a = vec![1, 0, 2, 0, 0, 1, 3, 1, 0];
        // det(λI - A) = λ^3 - λ^2 - 7λ + 1
        assert_eq!(charpoly_monic_mod_p(a, 3, p), [1, 94, 100, 1]);
    }

    #[test]
    fn crt_recovers_signed_values() {
        let mut crt = Crt::new(3);
        for p in PrimeStream::new().take(3) {
            let r = [-5i64, 0, 1 << 40].map(|v| v.rem_euclid(p as i64) as u64);
            crt.push(&r, p);
        }
        assert_eq!(crt.symmetric(), [BigInt::from(-5), BigInt::zero(), BigInt::from(1i64 << 40)]);
    }
}
