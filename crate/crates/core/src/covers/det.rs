//! `log det'` of a specialized matrix, through the characters of `G/H`.
//!
//! Over `C`, `C[G/H]^n` splits into the character lines, so `A_H` is
//! unitarily equivalent to the block sum of the `A(z)`, `z` in `H^perp`, and
//! `det'(A_H) = prod_z det'(A(z))`. Inside each block, singular values below
//! `max(rows, cols) * eps * sigma_max` count as zero; a `1 x 1` block uses
//! the exact zero test instead.

use num_complex::Complex;

use super::quotient::QuotientMatrix;
use crate::error::{Error, Result};
use crate::lattice::Sublattice;
use crate::laurent::LaurentMat;
use crate::mahler::eval::{ordered_sum, root_table, Evaluator};
use crate::numeric::{log_det_prime, CMatrix};
use crate::scalar::Real;

/// `log det'(A_H) = sum_{z in H^perp} log det'(A(z))`.
pub fn det_prime_via_characters<F: Real>(a: &LaurentMat, h: &Sublattice) -> Result<F> {
    if a.num_vars() != h.rank() {
        return Err(Error::Dimension(format!("{}-variable matrix over a rank {} lattice", a.num_vars(), h.rank())));
    }
    let exponent = h.elementary_divisors().iter().copied().max().unwrap_or(1);
    let table = root_table::<F>(exponent);
    let entries: Vec<Evaluator<'_, F>> = a.entries().iter().map(Evaluator::new).collect();
    let chars = h.dual_characters();
    let (rows, cols) = (a.rows(), a.cols());
    let (sum, _) = ordered_sum(chars.len(), |c| {
        let z = &chars[c];
        let scale = exponent / z.order();
        let k: Vec<u64> = z.numerators().iter().map(|&x| x * scale).collect();
        if rows * cols == 1 {
            let v = entries[0].eval(&k, exponent, &table);
            return Some(if entries[0].vanishes(&k, exponent, v) { F::zero() } else { v.norm().ln() });
        }
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, entries[i * cols + j].eval(&k, exponent, &table));
            }
        }
        Some(log_det_prime(&m).log)
    });
    Ok(sum)
}

/// `log det'` of the full integer specialization, by pivoted QR; the
/// cross-check for [`det_prime_via_characters`] on small quotients.
pub fn det_prime_dense<F: Real>(q: &QuotientMatrix) -> F {
    let b = &q.blocks;
    let mut m = CMatrix::zeros(b.rows(), b.cols());
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m.set(i, j, Complex::new(F::of_big(b.get(i, j)), F::zero()));
        }
    }
    log_det_prime(&m).log
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::specialize_to_quotient;

    fn mat(num_vars: usize, rows: &[&[&str]]) -> LaurentMat {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        LaurentMat::parse_rows(num_vars, &rows).unwrap()
    }

    #[test]
    fn closed_forms() {
        for n in [1u64, 2, 5, 12, 30] {
            let h = Sublattice::cyclic(n).unwrap();
            let a = mat(1, &[&["1 - 2*t1"]]);
            let v: f64 = det_prime_via_characters(&a, &h).unwrap();
            assert!((v - (2f64.powi(n as i32) - 1.0).ln()).abs() < 1e-10, "N = {n}");
            let a = mat(1, &[&["t1 - 1"]]);
            let v: f64 = det_prime_via_characters(&a, &h).unwrap();
            assert!((v - (n as f64).ln()).abs() < 1e-10, "N = {n}");
        }
        let v: f64 = det_prime_via_characters(&LaurentMat::identity(3, 2), &Sublattice::scalar(2, 3).unwrap()).unwrap();
        assert!(v.abs() < 1e-13);
    }

    #[test]
    fn dense_agrees_with_characters() {
        let a = mat(2, &[&["1 - 2*t1", "1"], &["0", "1 - 2*t2"]]);
        let h = Sublattice::from_generators(vec![vec![4, 1], vec![0, 3]]).unwrap();
        let q = specialize_to_quotient(&a, &h).unwrap();
        let dense: f64 = det_prime_dense(&q);
        let chars: f64 = det_prime_via_characters(&a, &h).unwrap();
        assert!((dense - chars).abs() < 1e-9 * dense.abs().max(1.0));
        // A kernel: t1 - 1 over Z^2 / 3Z^2.
        let a = mat(2, &[&["t1 - 1", "t2 - 1"]]);
        let h = Sublattice::scalar(2, 3).unwrap();
        let dense: f64 = det_prime_dense(&specialize_to_quotient(&a, &h).unwrap());
        let chars: f64 = det_prime_via_characters(&a, &h).unwrap();
        assert!((dense - chars).abs() < 1e-9 * dense.abs().max(1.0));
    }
}
