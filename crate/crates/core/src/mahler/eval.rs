//! Fast repeated evaluation at torsion points with a shared root-of-unity
//! table, and deterministic parallel summation.

use num_complex::Complex;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::laurent::{unit_root, CharacterPoint, LaurentPoly};
use crate::scalar::{CompensatedSum, Real};

const CHUNK: usize = 4096;

/// The `n`-th roots of unity `e^{2 pi i k / n}`, `k = 0..n`.
pub(crate) fn root_table<F: Real>(n: u64) -> Vec<Complex<F>> {
    (0..n).map(|k| unit_root(k, n)).collect()
}

/// A Laurent polynomial prepared for evaluation at points with angles
/// `k_j / n` for a fixed `n`.
pub(crate) struct Evaluator<'a, F: Real> {
    poly: &'a LaurentPoly,
    terms: Vec<(Vec<i64>, F)>,
    bound: F,
}

impl<'a, F: Real> Evaluator<'a, F> {
    pub fn new(poly: &'a LaurentPoly) -> Self {
        let terms: Vec<(Vec<i64>, F)> = poly.terms().map(|(e, c)| (e.clone(), F::of_big(c))).collect();
        let l1 = F::of(poly.l1_norm().to_f64().unwrap_or(f64::INFINITY));
        let bound = F::of(1024.0) * F::of_usize(terms.len() + 4) * F::epsilon() * l1;
        Self { poly, terms, bound }
    }

    /// Value at the point with angles `k_j / n`, using `table = root_table(n)`.
    pub fn eval(&self, k: &[u64], n: u64, table: &[Complex<F>]) -> Complex<F> {
        let mut re = CompensatedSum::<F>::default();
        let mut im = CompensatedSum::<F>::default();
        for (e, c) in &self.terms {
            let s: i128 = e.iter().zip(k).map(|(&x, &a)| x as i128 * a as i128).sum();
            let w = table[s.rem_euclid(n as i128) as usize];
            re.add(*c * w.re);
            im.add(*c * w.im);
        }
        Complex::new(re.value(), im.value())
    }

    /// True when the polynomial vanishes exactly at the point; `v` is its
    /// floating-point value there.
    pub fn vanishes(&self, k: &[u64], n: u64, v: Complex<F>) -> bool {
        if self.bound.is_finite() && v.norm() > self.bound {
            return false;
        }
        let nums: Vec<i64> = k.iter().map(|&a| a as i64).collect();
        let z = CharacterPoint::new(&nums, n).expect("positive denominator");
        self.poly.is_zero_at_character(&z)
    }

    /// `log|p|` at the point, or `None` at an exact zero.
    pub fn log_abs(&self, k: &[u64], n: u64, table: &[Complex<F>]) -> Option<F> {
        let v = self.eval(k, n, table);
        if self.vanishes(k, n, v) {
            return None;
        }
        Some(safe_ln(v.norm()))
    }
}

/// `ln x`, clamped away from `-inf` when rounding produced an exact zero at
/// a point where the true value is nonzero.
pub(crate) fn safe_ln<F: Real>(x: F) -> F {
    x.max(F::min_positive_value()).ln()
}

/// Sum of `f(i)` over `i in 0..n`, skipping `None`, computed in parallel
/// over fixed chunks merged in order, so the result does not depend on the
/// thread count. Returns the sum and the number of skipped indices.
pub(crate) fn ordered_sum<F, G>(n: usize, f: G) -> (F, u64)
where
    F: Real,
    G: Fn(usize) -> Option<F> + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<(CompensatedSum<F>, u64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = CompensatedSum::default();
            let mut skipped = 0u64;
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                match f(i) {
                    Some(x) => acc.add(x),
                    None => skipped += 1,
                }
            }
            (acc, skipped)
        })
        .collect();
    let mut total = CompensatedSum::default();
    let mut skipped = 0;
    for (p, s) in &parts {
        total.merge(p);
        skipped += s;
    }
    (total.value(), skipped)
}

/// Mixed-radix digits of `flat` with every radix equal to `n`.
pub(crate) fn grid_point(mut flat: usize, n: usize, dims: usize) -> Vec<u64> {
    let mut k = vec![0u64; dims];
    for slot in k.iter_mut().rev() {
        *slot = (flat % n) as u64;
        flat /= n;
    }
    k
}
