//! Dense complex linear algebra used by the floating-point estimators:
//! polynomial roots through companion-matrix eigenvalues, and the product of
//! nonzero singular values of a rectangular matrix.

mod eigen;
mod qr;

pub use eigen::{hessenberg_eigenvalues, polynomial_roots};
pub use qr::{log_det_prime, log_det_prime_with_rank, DetPrime};

use num_complex::Complex;

use crate::scalar::Real;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<F>>,
}

impl<F: Real> CMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::new(F::zero(), F::zero()); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Complex<F>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_real_rows(rows: &[Vec<F>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Complex::new(x, F::zero())).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<F> {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Complex<F>) {
        self.data[i * self.cols + j] = x;
    }

    #[inline]
    fn at(&mut self, i: usize, j: usize) -> &mut Complex<F> {
        &mut self.data[i * self.cols + j]
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    *out.at(i, j) = out.get(i, j) + a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> F {
        self.data.iter().map(|z| z.norm()).fold(F::zero(), F::max)
    }
}
