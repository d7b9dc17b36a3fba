//! Rank over the fraction field `Q(G)`.
//!
//! The matrix is evaluated at a random point of `(F_p^*)^m` with
//! `p = 2^61 - 1`; evaluation can only lower the rank, and does so with
//! probability at most `deg / p` by Schwartz-Zippel. Two independent points
//! are tried and an exact fraction-free elimination settles disagreement.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Presentation;
use crate::laurent::{LaurentMat, LaurentPoly};

const P: u64 = (1 << 61) - 1;

/// Seed used by [`matrix_rank`] and [`presentation_rank`].
pub const DEFAULT_RANK_SEED: u64 = 0x5eed_a1e8_2024;

/// `rk(M) = g - rank(A)` for the presented module.
pub fn presentation_rank(p: &Presentation) -> usize {
    presentation_rank_seeded(p, DEFAULT_RANK_SEED)
}

pub fn presentation_rank_seeded(p: &Presentation, seed: u64) -> usize {
    p.generators() - matrix_rank_seeded(p.matrix(), seed)
}

/// Rank of a Laurent matrix over the fraction field.
pub fn matrix_rank(a: &LaurentMat) -> usize {
    matrix_rank_seeded(a, DEFAULT_RANK_SEED)
}

pub fn matrix_rank_seeded(a: &LaurentMat, seed: u64) -> usize {
    if a.rows() == 0 || a.cols() == 0 || a.is_zero() {
        return 0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trial = || {
        let point: Vec<u64> = (0..a.num_vars()).map(|_| rng.random_range(2..P - 1)).collect();
        rank_mod_p(&evaluate(a, &point))
    };
    let (r1, r2) = (trial(), trial());
    if r1 == r2 {
        r1
    } else {
        a.exact_rank()
    }
}

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn reduce(c: &BigInt) -> u64 {
    c.mod_floor(&BigInt::from(P)).to_u64().unwrap()
}

fn eval_poly(p: &LaurentPoly, point: &[u64], inverses: &[u64]) -> u64 {
    let mut acc = 0u64;
    for (e, c) in p.terms() {
        let mut term = reduce(c);
        for (j, &k) in e.iter().enumerate() {
            let base = if k >= 0 { point[j] } else { inverses[j] };
            term = mul(term, pow(base, k.unsigned_abs()));
        }
        acc = (acc + term) % P;
    }
    acc
}

fn evaluate(a: &LaurentMat, point: &[u64]) -> Vec<Vec<u64>> {
    let inverses: Vec<u64> = point.iter().map(|&x| inv(x)).collect();
    (0..a.rows()).map(|i| a.row(i).iter().map(|e| eval_poly(e, point, &inverses)).collect()).collect()
}

fn rank_mod_p(m: &[Vec<u64>]) -> usize {
    let mut m = m.to_vec();
    let (rows, cols) = (m.len(), m.first().map_or(0, Vec::len));
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let iv = inv(m[rank][c]);
        for r in rank + 1..rows {
            if m[r][c] != 0 {
                let f = mul(m[r][c], iv);
                let (top, bottom) = m.split_at_mut(r);
                for (x, &y) in bottom[0][c..cols].iter_mut().zip(&top[rank][c..cols]) {
                    *x = (*x + P - mul(f, y)) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}
