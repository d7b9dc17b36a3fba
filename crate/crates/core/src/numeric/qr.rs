//! `det'`: the product of the nonzero singular values.
//!
//! A Householder QR with column pivoting `A P = Q [R11 R12; 0 R22]` reveals
//! the numeric rank `k`: diagonal entries of `R` below
//! `max(rows, cols) * eps * |R_00|` are treated as zero. The nonzero
//! singular values of `A` are then those of the full-row-rank block
//! `B = [R11 R12]`, whose product is `sqrt(det(B B^*))`; a second QR of
//! `B^*` gives it as `prod |R'_ii|`.

use num_complex::Complex;

use super::CMatrix;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetPrime<F> {
    /// `log det'`; zero (empty product) for the zero matrix.
    pub log: F,
    pub rank: usize,
}

pub fn log_det_prime<F: Real>(a: &CMatrix<F>) -> DetPrime<F> {
    let (r, rank) = pivoted_qr(a.clone());
    DetPrime { log: log_top_rows(&r, rank), rank }
}

/// Like [`log_det_prime`], but with the rank supplied by the caller (for
/// instance the exact generic rank). Returns the log-product of the `rank`
/// singular values revealed by the pivoted QR, together with the numeric
/// rank that the cutoff would have chosen.
pub fn log_det_prime_with_rank<F: Real>(a: &CMatrix<F>, rank: usize) -> DetPrime<F> {
    let (r, numeric) = pivoted_qr(a.clone());
    let rank = rank.min(r.rows().min(r.cols()));
    DetPrime { log: log_top_rows(&r, rank), rank: numeric }
}

/// Log singular-value product of the first `k` rows of a triangular `R`.
fn log_top_rows<F: Real>(r: &CMatrix<F>, k: usize) -> F {
    if k == 0 {
        return F::zero();
    }
    if k == r.cols() {
        // B = [R11] is square: its singular-value product is |det R11|.
        return (0..k).map(|i| r.get(i, i).norm().ln()).sum();
    }
    let mut bt = CMatrix::zeros(r.cols(), k);
    for i in 0..k {
        for j in i..r.cols() {
            bt.set(j, i, r.get(i, j).conj());
        }
    }
    let (r2, _) = householder(bt, false);
    (0..k).map(|i| r2.get(i, i).norm().ln()).sum()
}

/// Upper-triangular factor (with pivoting); returns `R` and the numeric rank.
fn pivoted_qr<F: Real>(a: CMatrix<F>) -> (CMatrix<F>, usize) {
    let dim = a.rows().max(a.cols());
    let (r, _) = householder(a, true);
    let k = r.rows().min(r.cols());
    if k == 0 {
        return (r, 0);
    }
    let top = r.get(0, 0).norm();
    if top == F::zero() {
        return (r, 0);
    }
    let tol = F::of_usize(dim) * F::epsilon() * top;
    let rank = (0..k).take_while(|&i| r.get(i, i).norm() > tol).count();
    (r, rank)
}

/// In-place Householder triangularization, optionally with column pivoting
/// on the remaining column norms. Returns the triangular factor and the
/// column permutation (unused by callers but kept for debugging).
fn householder<F: Real>(mut a: CMatrix<F>, pivot: bool) -> (CMatrix<F>, Vec<usize>) {
    let (m, n) = (a.rows(), a.cols());
    let mut perm: Vec<usize> = (0..n).collect();
    let zero = Complex::new(F::zero(), F::zero());
    for k in 0..m.min(n) {
        if pivot {
            let norm2 = |a: &CMatrix<F>, j: usize| (k..m).map(|i| a.get(i, j).norm_sqr()).fold(F::zero(), |s, x| s + x);
            let best = (k..n).max_by(|&x, &y| norm2(&a, x).partial_cmp(&norm2(&a, y)).unwrap()).unwrap();
            if best != k {
                for i in 0..m {
                    let t = a.get(i, k);
                    a.set(i, k, a.get(i, best));
                    a.set(i, best, t);
                }
                perm.swap(k, best);
            }
        }
        let alpha = (k..m).map(|i| a.get(i, k).norm_sqr()).fold(F::zero(), |s, x| s + x).sqrt();
        if alpha == F::zero() {
            continue;
        }
        let x0 = a.get(k, k);
        let phase = if x0.norm() == F::zero() { Complex::new(F::one(), F::zero()) } else { x0 / x0.norm() };
        // v = x + phase * alpha * e_1, so that H x = -phase * alpha * e_1.
        let mut v: Vec<Complex<F>> = (k..m).map(|i| a.get(i, k)).collect();
        v[0] = v[0] + phase * alpha;
        let vnorm2 = v.iter().map(|z| z.norm_sqr()).fold(F::zero(), |s, x| s + x);
        if vnorm2 == F::zero() {
            continue;
        }
        let two = F::of(2.0);
        for j in k..n {
            let mut dot = zero;
            for (t, vi) in v.iter().enumerate() {
                dot = dot + vi.conj() * a.get(k + t, j);
            }
            let f = dot * (two / vnorm2);
            for (t, vi) in v.iter().enumerate() {
                let cur = a.get(k + t, j);
                a.set(k + t, j, cur - *vi * f);
            }
        }
        for i in k + 1..m {
            a.set(i, k, zero);
        }
    }
    (a, perm)
}
