//! Fuglede–Kadison determinants over `Z[Z^m]`, ℓ²-torsion of complexes and
//! ℓ²-volumes of free submodules.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::eval::{grid_point, ordered_sum, root_table, Evaluator};
use super::{grid_size, mahler_multivariate, MahlerEstimate, Strategy};
use crate::alexmod::{alexander_polynomial, matrix_rank, ChainComplex, Presentation};
use crate::error::{Error, Result};
use crate::laurent::LaurentMat;
use crate::numeric::{log_det_prime_with_rank, CMatrix};
use crate::scalar::Real;

/// `log det_N(G)(A) = m(det A)` for square `A` with `det A != 0`.
pub fn fk_log_det_exact<F: Real>(a: &LaurentMat) -> Result<MahlerEstimate<F>> {
    let det = a.det()?;
    if det.is_zero() {
        return Err(Error::Singular("det A = 0; use fk_det_numeric".into()));
    }
    mahler_multivariate(&det, &Strategy::Auto)
}

pub fn fk_det_exact<F: Real>(a: &LaurentMat) -> Result<F> {
    Ok(fk_log_det_exact::<F>(a)?.measure())
}

/// Torus average of `log det'(A(z))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FkEstimate<F> {
    pub log: F,
    pub error_budget: F,
    /// Generic rank of `A` over the fraction field.
    pub rank: usize,
    pub samples: u64,
    /// Grid points where `A(z)` drops rank.
    pub skipped: u64,
}

impl<F: Real> FkEstimate<F> {
    pub fn value(&self) -> F {
        self.log.exp()
    }
}

struct MatrixEvaluator<'a, F: Real> {
    rows: usize,
    cols: usize,
    entries: Vec<Evaluator<'a, F>>,
    rank: usize,
}

impl<'a, F: Real> MatrixEvaluator<'a, F> {
    fn new(a: &'a LaurentMat) -> Self {
        Self { rows: a.rows(), cols: a.cols(), entries: a.entries().iter().map(Evaluator::new).collect(), rank: matrix_rank(a) }
    }

    /// `log det'` at the grid point using the generic rank, or `None` where
    /// the rank drops.
    fn log_det_prime(&self, k: &[u64], n: u64, table: &[Complex<F>]) -> Option<F> {
        if self.rows * self.cols == 1 {
            let v = self.entries[0].eval(k, n, table);
            return if self.entries[0].vanishes(k, n, v) { None } else { Some(super::safe_ln(v.norm())) };
        }
        let mut m = CMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.entries[i * self.cols + j].eval(k, n, table));
            }
        }
        let d = log_det_prime_with_rank(&m, self.rank);
        (d.rank >= self.rank).then_some(d.log)
    }

    fn average(&self, n: usize, dims: usize) -> Result<(F, u64, u64)> {
        let total = grid_size(n, dims)?;
        let table = root_table::<F>(n as u64);
        let (sum, skipped) = ordered_sum(total, |i| self.log_det_prime(&grid_point(i, n, dims), n as u64, &table));
        let used = total as u64 - skipped;
        if used == 0 {
            return Err(Error::Domain("A(z) drops rank at every grid point".into()));
        }
        Ok((sum / F::of(used as f64), total as u64, skipped))
    }
}

/// `det_N(G)(A)` for any nonzero `A`, as the exponential of the average of
/// `log det'(A(z))` over a `grid^m` torus grid. Points where the numeric
/// rank of `A(z)` falls below the generic rank are skipped.
pub fn fk_det_numeric<F: Real>(a: &LaurentMat, grid: usize) -> Result<FkEstimate<F>> {
    if a.is_zero() {
        return Err(Error::Domain("Fuglede–Kadison determinant of the zero matrix".into()));
    }
    if grid == 0 {
        return Err(Error::Domain("grid size must be positive".into()));
    }
    let ev = MatrixEvaluator::<F>::new(a);
    let dims = a.num_vars();
    let (log, samples, skipped) = ev.average(grid, dims)?;
    let budget = if grid >= 2 { (log - ev.average(grid / 2, dims)?.0).abs() } else { F::infinity() };
    Ok(FkEstimate { log, error_budget: budget, rank: ev.rank, samples, skipped })
}

/// Default grid for numeric determinants in `m` variables.
pub fn default_numeric_grid(m: usize) -> usize {
    match m {
        0 | 1 => 4096,
        2 => 128,
        3 => 24,
        _ => 8,
    }
}

/// Contribution of one differential to the ℓ²-torsion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct L2Factor<F> {
    pub degree: usize,
    pub log_det: F,
    pub error_budget: F,
    /// True when computed as `m(det d_i)`.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct L2TorsionReport<F> {
    /// `log tau = sum_i (-1)^i log det(d_i)`.
    pub log_torsion: F,
    pub error_budget: F,
    pub factors: Vec<L2Factor<F>>,
    /// `-m(Delta_0(H_0))` when the complex is a single square differential
    /// with nonzero determinant, computed through the elementary ideal.
    pub cross_check: Option<F>,
}

impl<F: Real> L2TorsionReport<F> {
    pub fn torsion(&self) -> F {
        self.log_torsion.exp()
    }
}

/// `tau(C) = prod_i det(d_i)^{(-1)^i}`. For the resolution
/// `0 -> Z[G] --(P)--> Z[G] -> 0` this is `M(P)^{-1}`.
pub fn l2_torsion<F: Real>(c: &ChainComplex) -> Result<L2TorsionReport<F>> {
    l2_torsion_with_grid(c, default_numeric_grid(c.num_vars()))
}

/// [`l2_torsion`] with an explicit grid for differentials that are not
/// square and nonsingular.
pub fn l2_torsion_with_grid<F: Real>(c: &ChainComplex, grid: usize) -> Result<L2TorsionReport<F>> {
    let mut factors = Vec::new();
    let mut log = F::zero();
    let mut budget = F::zero();
    for (idx, d) in c.differentials().iter().enumerate() {
        let degree = idx + 1;
        let factor = if d.is_zero() {
            L2Factor { degree, log_det: F::zero(), error_budget: F::zero(), exact: true }
        } else if d.is_square() && !d.det()?.is_zero() {
            let e = fk_log_det_exact::<F>(d)?;
            L2Factor { degree, log_det: e.value, error_budget: e.error_budget, exact: true }
        } else {
            let e = fk_det_numeric::<F>(d, grid)?;
            L2Factor { degree, log_det: e.log, error_budget: e.error_budget, exact: false }
        };
        if degree % 2 == 0 {
            log = log + factor.log_det;
        } else {
            log = log - factor.log_det;
        }
        budget = budget + factor.error_budget;
        factors.push(factor);
    }
    let cross_check = match c.differentials() {
        [d] if d.is_square() && d.rows() > 0 => {
            let delta = alexander_polynomial(&Presentation::new(d.clone()), 0);
            if delta.is_zero() {
                None
            } else {
                Some(-mahler_multivariate::<F>(&delta, &Strategy::Auto)?.value)
            }
        }
        _ => None,
    };
    Ok(L2TorsionReport { log_torsion: log, error_budget: budget, factors, cross_check })
}

/// `log vol(L) = m(det(A^* A)) / 2` for the free module `L` spanned by the
/// columns of `A`.
pub fn l2_log_volume<F: Real>(a: &LaurentMat) -> Result<MahlerEstimate<F>> {
    let r = matrix_rank(a);
    if r < a.cols() {
        return Err(Error::RankDeficient(format!("columns have rank {r} < {}; pass a maximal free subfamily", a.cols())));
    }
    let gram = a.adjoint().multiply(a)?;
    let det = gram.det()?;
    let mut e = mahler_multivariate::<F>(&det, &Strategy::Auto)?;
    let half = F::of(0.5);
    e.value = e.value * half;
    e.error_budget = e.error_budget * half;
    Ok(e)
}

pub fn l2_volume<F: Real>(a: &LaurentMat) -> Result<F> {
    Ok(l2_log_volume::<F>(a)?.measure())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;

    fn mat(num_vars: usize, rows: &[&[&str]]) -> LaurentMat {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        LaurentMat::parse_rows(num_vars, &rows).unwrap()
    }

    #[test]
    fn exact_examples() {
        assert!((fk_det_exact::<f64>(&mat(1, &[&["1 - 2*t1"]])).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(fk_det_exact::<f64>(&LaurentMat::identity(2, 3)).unwrap(), 1.0);
        assert!((fk_det_exact::<f64>(&mat(2, &[&["t1", "0"], &["0", "t2"]])).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(fk_det_exact::<f64>(&mat(1, &[&["1", "1"], &["1", "1"]])), Err(Error::Singular(_))));
    }

    #[test]
    fn numeric_examples() {
        let a = fk_det_numeric::<f64>(&mat(1, &[&["1 - 2*t1"]]), 1024).unwrap();
        assert!((a.value() - 2.0).abs() < 1e-9);
        let rect = fk_det_numeric::<f64>(&mat(1, &[&["1 - 2*t1", "0"]]), 1024).unwrap();
        assert!((rect.value() - 2.0).abs() < 1e-9);
        let unit = fk_det_numeric::<f64>(&mat(1, &[&["t1"]]), 16).unwrap();
        assert!(unit.log.abs() < 1e-14);
        assert!(fk_det_numeric::<f64>(&LaurentMat::zeros(1, 2, 2), 8).is_err());
    }

    #[test]
    fn singular_square_matrix_uses_nonzero_singular_values() {
        // Rank one: singular value sqrt(2) |1 - 2t|.
        let a = mat(1, &[&["1 - 2*t1", "1 - 2*t1"], &["0", "0"]]);
        let e = fk_det_numeric::<f64>(&a, 512).unwrap();
        assert_eq!(e.rank, 1);
        assert!((e.value() - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn resolution_torsion_is_inverse_measure() {
        let p: LaurentPoly = "t1^2 - 3*t1 + 1".parse().unwrap();
        let r = l2_torsion::<f64>(&ChainComplex::resolution(&p)).unwrap();
        let m = 2.0 * ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((r.log_torsion + m).abs() < 1e-12);
        assert!((r.cross_check.unwrap() - r.log_torsion).abs() < 1e-12);
        let id = ChainComplex::new(1, vec![LaurentMat::identity(2, 1)]).unwrap();
        assert_eq!(l2_torsion::<f64>(&id).unwrap().torsion(), 1.0);
    }

    #[test]
    fn volume_examples() {
        assert!((l2_volume::<f64>(&mat(1, &[&["1 - 2*t1"]])).unwrap() - 2.0).abs() < 1e-12);
        assert!((l2_volume::<f64>(&mat(1, &[&["1"], &["t1"]])).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(l2_volume::<f64>(&LaurentMat::identity(2, 1)).unwrap(), 1.0);
        let dependent = mat(1, &[&["1", "2"], &["t1", "2*t1"]]);
        assert!(matches!(l2_volume::<f64>(&dependent), Err(Error::RankDeficient(_))));
    }
}
