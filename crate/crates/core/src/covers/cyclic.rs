//! Torsion of `Z[X]/(X^M - 1, g)` without forming the `M x M` circulant.
//!
//! When `g` is monic up to sign, `Z[X]/(g)` is free on `1, X, ..., X^{d-1}`
//! and the quotient by `X^M - 1` is the cokernel of multiplication by
//! `(X^M mod g) - 1`, a `d x d` integer matrix. A polynomial with constant
//! term `±1` is first reversed, which is the automorphism `X -> X^{-1}` of
//! `Z[Z/M]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lattice::Sublattice;
use crate::laurent::LaurentPoly;
use crate::snf::{smith_normal_form, IntMatrix};

/// `G/H` cyclic of order `modulus`, identified with `Z/M` by
/// `e -> <e, weights> mod M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicQuotient {
    pub modulus: u64,
    pub weights: Vec<i64>,
}

/// Largest modulus for which [`CyclicQuotient::tuned`] scans all units.
const UNIT_SCAN_LIMIT: u64 = 200_000;

fn symmetric_lift(x: u64, m: u64) -> i64 {
    let x = x % m;
    if x > m / 2 {
        x as i64 - m as i64
    } else {
        x as i64
    }
}

impl CyclicQuotient {
    /// `None` when `G/H` is not cyclic.
    pub fn of(h: &Sublattice) -> Option<Self> {
        if !h.is_cyclic() {
            return None;
        }
        let m = h.rank();
        let modulus = h.index();
        let weights = (0..m)
            .map(|j| {
                let mut e = vec![0i64; m];
                e[j] = 1;
                h.quotient_coords(&e).first().map_or(0, |&c| symmetric_lift(c, modulus))
            })
            .collect();
        Some(Self { modulus, weights })
    }

    /// Like [`CyclicQuotient::of`], with the weights rescaled by the unit of
    /// `Z/M` that makes the images of `polys` as short as possible.
    pub fn tuned(h: &Sublattice, polys: &[&LaurentPoly]) -> Option<Self> {
        let base = Self::of(h)?;
        let m = base.modulus;
        if m <= 2 || m > UNIT_SCAN_LIMIT {
            return Some(base);
        }
        let spread = |w: &[i64]| {
            polys
                .iter()
                .map(|p| {
                    let mut lo = i64::MAX;
                    let mut hi = i64::MIN;
                    for (e, _) in p.terms() {
                        let s: i64 = e.iter().zip(w).map(|(a, b)| a * b).sum();
                        lo = lo.min(s);
                        hi = hi.max(s);
                    }
                    hi.saturating_sub(lo)
                })
                .max()
                .unwrap_or(0)
        };
        let scaled = |u: u64| -> Vec<i64> {
            base.weights.iter().map(|&w| symmetric_lift((w.rem_euclid(m as i64) as u128 * u as u128 % m as u128) as u64, m)).collect()
        };
        let best = (1..m).filter(|u| u.gcd(&m) == 1).min_by_key(|&u| (spread(&scaled(u)), u)).unwrap_or(1);
        Some(Self { modulus: m, weights: scaled(best) })
    }

    /// `g(X)` with `t_j -> X^{w_j}`: dense ascending coefficients of a
    /// polynomial with nonzero constant term, reduced mod `X^M - 1` when its
    /// degree reaches `M`. Empty when the image is zero.
    pub fn image(&self, p: &LaurentPoly) -> Vec<BigInt> {
        let terms: Vec<(i64, &BigInt)> = p.terms().map(|(e, c)| (e.iter().zip(&self.weights).map(|(a, b)| a * b).sum(), c)).collect();
        let lo = terms.iter().map(|t| t.0).min().unwrap_or(0);
        let hi = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let m = self.modulus as i64;
        let reduce = hi - lo >= m;
        let len = if reduce { m } else { hi - lo + 1 } as usize;
        let mut c = vec![BigInt::zero(); len];
        for (s, coeff) in terms {
            let k = if reduce { s.rem_euclid(m) } else { s - lo } as usize;
            c[k] += coeff;
        }
        strip(c)
    }
}

/// Removes trailing zeros and leading powers of `X`.
fn strip(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let lead_zeros = c.iter().take_while(|x| x.is_zero()).count();
    c.drain(..lead_zeros);
    c
}

/// Betti number and torsion divisors (> 1) of `Z[X]/(X^M - 1, g)`, or
/// `None` when `g` is neither monic nor comonic up to sign.
pub fn cyclic_module_homology(g: &[BigInt], modulus: u64) -> Option<(u64, Vec<BigInt>)> {
    let g = strip(g.to_vec());
    if g.is_empty() {
        return Some((modulus, Vec::new()));
    }
    if g.len() == 1 {
        let c = g[0].abs();
        return Some(if c.is_one() { (0, Vec::new()) } else { (0, vec![c; modulus as usize]) });
    }
    let mut g = if g.last().unwrap().abs().is_one() {
        g
    } else if g[0].abs().is_one() {
        g.into_iter().rev().collect()
    } else {
        return None;
    };
    if g.last().unwrap().is_negative() {
        g.iter_mut().for_each(|x| *x = -x.clone());
    }
    let d = g.len() - 1;
    let mut h = pow_x_mod(modulus, &g);
    h[0] -= 1;
    // Column k is X^k (h - 1) mod g.
    let mut k = IntMatrix::zeros(d, d);
    let mut col = h;
    for j in 0..d {
        for (i, x) in col.iter().enumerate() {
            k.set(i, j, x.clone());
        }
        col = times_x_mod(&col, &g);
    }
    let s = smith_normal_form(&k, false);
    Some(((d - s.rank) as u64, s.torsion_divisors()))
}

/// `X * a mod g` for monic `g` of degree `d` and `a` of length `d`.
fn times_x_mod(a: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let d = g.len() - 1;
    let top = a[d - 1].clone();
    let mut out = vec![BigInt::zero(); d];
    for i in (1..d).rev() {
        out[i] = a[i - 1].clone();
    }
    if !top.is_zero() {
        for i in 0..d {
            out[i] -= &top * &g[i];
        }
    }
    out
}

fn mul_mod(a: &[BigInt], b: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let d = g.len() - 1;
    let mut prod = vec![BigInt::zero(); 2 * d];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for i in (d..2 * d).rev() {
        if prod[i].is_zero() {
            continue;
        }
        let q = std::mem::take(&mut prod[i]);
        for j in 0..d {
            prod[i - d + j] -= &q * &g[j];
        }
    }
    prod.truncate(d);
    prod
}

/// `X^n mod g` by binary powering, as `d` coefficients.
fn pow_x_mod(n: u64, g: &[BigInt]) -> Vec<BigInt> {
    let d = g.len() - 1;
    let mut result = vec![BigInt::zero(); d];
    result[0] = BigInt::one();
    let mut base = vec![BigInt::zero(); d];
    base[0] = BigInt::one();
    base = times_x_mod(&base, g);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &base, g);
        }
        e >>= 1;
        if e > 0 {
            base = mul_mod(&base, &base, g);
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::cyclic_resultant;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn figure_eight_torsion_matches_resultant() {
        let delta = LaurentPoly::from_coeffs(0, &[1, -3, 1]);
        for n in 1..=20u64 {
            let (betti, div) = cyclic_module_homology(&big(&[1, -3, 1]), n).unwrap();
            assert_eq!(betti, 0);
            let order: BigInt = div.iter().product();
            assert_eq!(order, cyclic_resultant(&delta, n).unwrap().abs(), "N = {n}");
        }
    }

    #[test]
    fn zeros_at_roots_of_unity_give_betti() {
        // 1 + X + X^2 vanishes at primitive cube roots.
        let (b, _) = cyclic_module_homology(&big(&[1, 1, 1]), 6).unwrap();
        assert_eq!(b, 2);
        let (b, div) = cyclic_module_homology(&big(&[-1, 1]), 5).unwrap();
        assert_eq!((b, div.len()), (1, 0));
    }

    #[test]
    fn comonic_is_reversed_and_constants_repeat() {
        // 1 - 2X: Z[X]/(X^N - 1, 1 - 2X) = Z/(2^N - 1).
        let (b, div) = cyclic_module_homology(&big(&[1, -2]), 6).unwrap();
        assert_eq!((b, div), (0, vec![BigInt::from(63)]));
        let (_, div) = cyclic_module_homology(&big(&[3]), 4).unwrap();
        assert_eq!(div.len(), 4);
        assert!(cyclic_module_homology(&big(&[2, 1, 2]), 4).is_none());
    }

    #[test]
    fn tuned_weights_are_short() {
        let (h, spec) = crate::lattice::construct_gpm(2, 5, 101).unwrap();
        let p: LaurentPoly = "1 + t1 + t2".parse().unwrap();
        let q = CyclicQuotient::tuned(&h, &[&p]).unwrap();
        assert_eq!(q.modulus, 101);
        let spread = q.image(&p).len() - 1;
        assert!(spread as i64 <= spec.weights.iter().copied().max().unwrap());
        // Characters of the weight map annihilate exactly H.
        for v in h.generators() {
            let s: i64 = v.iter().zip(&q.weights).map(|(a, b)| a * b).sum();
            assert_eq!(s.rem_euclid(101), 0);
        }
    }
}
