//! Logarithmic Mahler measures `m(P) = ∫ log|P|` over the unit torus, and
//! the operator determinants built on them.
//!
//! One-variable measures come from Jensen's formula (roots of a balanced
//! companion matrix) or from Riemann sums over roots of unity. Several
//! variables are handled by torus grids, Boyd–Lawton specialization, sums
//! over the duals of `G_{p,M}`, or a fibered Jensen quadrature that applies
//! Jensen's formula in one variable and a grid in the others.

pub(crate) mod eval;
mod fk;

pub use fk::{
    default_numeric_grid, fk_det_exact, fk_det_numeric, fk_log_det_exact, l2_log_volume, l2_torsion, l2_torsion_with_grid, l2_volume,
    FkEstimate, L2Factor, L2TorsionReport,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{construct_gpm, next_primes, Sublattice};
use crate::laurent::{gcd, LaurentPoly};
use crate::numeric::polynomial_roots;
use crate::scalar::{big_ln_abs, Real};
use eval::{grid_point, ordered_sum, root_table, safe_ln, Evaluator};

/// Largest number of quadrature points a single estimate may use.
pub const MAX_SAMPLES: u64 = 1 << 32;

/// Degree above which Boyd–Lawton specializations switch from roots to a
/// Riemann sum.
const BOYD_LAWTON_ROOT_DEGREE: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MahlerMethod {
    JensenRoots,
    RiemannCyclic,
    TorusGrid,
    BoydLawton,
    GpmSequence,
    FiberedJensen,
}

impl MahlerMethod {
    pub const ALL: [MahlerMethod; 6] =
        [Self::JensenRoots, Self::RiemannCyclic, Self::TorusGrid, Self::BoydLawton, Self::GpmSequence, Self::FiberedJensen];

    pub fn name(self) -> &'static str {
        match self {
            Self::JensenRoots => "jensen_roots",
            Self::RiemannCyclic => "riemann_cyclic",
            Self::TorusGrid => "torus_grid",
            Self::BoydLawton => "boyd_lawton",
            Self::GpmSequence => "gpm_sequence",
            Self::FiberedJensen => "fibered_jensen",
        }
    }
}

impl fmt::Display for MahlerMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MahlerMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| Error::Parse(format!("unknown Mahler method `{s}`")))
    }
}

/// An estimate of `m(P)` with an error budget.
///
/// The budget is a heuristic: the root-based methods use the propagated
/// root accuracy, the quadratures use the difference between the rule and
/// the same rule at half resolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MahlerEstimate<F> {
    pub value: F,
    pub method: MahlerMethod,
    pub error_budget: F,
    pub samples: u64,
    pub zeros_skipped: u64,
}

impl<F: Real> MahlerEstimate<F> {
    /// `exp(m(P))`.
    pub fn measure(&self) -> F {
        self.value.exp()
    }

    fn exact(value: F, method: MahlerMethod) -> Self {
        Self { value, method, error_budget: F::zero(), samples: 0, zeros_skipped: 0 }
    }
}

/// How [`mahler_one_var`] evaluates the integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum OneVarMethod {
    JensenRoots,
    RiemannCyclic { n: u64 },
}

/// How [`mahler_multivariate`] evaluates the integral.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum Strategy {
    /// Jensen for one active variable, fibered Jensen otherwise.
    Auto,
    TorusGrid {
        n: usize,
    },
    /// Specialize along `direction`, or along the `G_{p,M}` weights for `p`.
    BoydLawton {
        direction: Option<Vec<i64>>,
        p: u64,
    },
    /// Averages over the duals of `G_{p,M}` for each modulus; the last one
    /// is reported.
    GpmSequence {
        p: u64,
        moduli: Vec<u64>,
    },
    FiberedJensen {
        n: usize,
    },
}

/// Default fibered grid size for `m` active variables.
pub fn default_fibered_grid(m: usize) -> usize {
    match m {
        0..=2 => 2048,
        3 => 256,
        _ => 64,
    }
}

fn jensen_budget<F: Real>(degree: usize) -> F {
    F::of_usize(degree) * F::of(1e-8).max(F::of(1000.0) * F::epsilon())
}

fn check_nonzero(p: &LaurentPoly) -> Result<()> {
    if p.is_zero() {
        return Err(Error::Domain("Mahler measure of the zero polynomial".into()));
    }
    Ok(())
}

/// Indices of the variables occurring with a nonconstant exponent.
fn active_variables(p: &LaurentPoly) -> Vec<usize> {
    let lo = p.min_exponents();
    let hi = p.max_exponents();
    (0..p.num_vars()).filter(|&j| lo[j] != hi[j]).collect()
}

/// Drops inactive variables (after shifting them to exponent zero), which
/// leaves the measure unchanged.
fn compress(p: &LaurentPoly) -> LaurentPoly {
    let active = active_variables(p);
    let (base, _) = p.to_polynomial_part();
    let mut out = LaurentPoly::zero(active.len());
    for (e, c) in base.terms() {
        let ne: Vec<i64> = active.iter().map(|&j| e[j]).collect();
        out = out + LaurentPoly::monomial(active.len(), ne, c.clone());
    }
    out
}

fn ln_big<F: Real>(c: &BigInt) -> F {
    F::of(big_ln_abs(c))
}

/// `c / lead` as a float, accurate for arbitrarily large integers.
fn ratio<F: Real>(c: &BigInt, lead: &BigInt) -> F {
    if c.is_zero() {
        return F::zero();
    }
    let mag = F::of(big_ln_abs(c) - big_ln_abs(lead)).exp();
    if c.is_negative() != lead.is_negative() {
        -mag
    } else {
        mag
    }
}

/// `m(P)` of a one-variable polynomial.
pub fn mahler_one_var<F: Real>(p: &LaurentPoly, method: OneVarMethod) -> Result<MahlerEstimate<F>> {
    check_nonzero(p)?;
    if active_variables(p).len() > 1 {
        return Err(Error::Dimension(format!("{p} depends on more than one variable")));
    }
    let q = compress(p);
    if q.num_vars() == 0 {
        let c = q.constant_term();
        let tag = match method {
            OneVarMethod::JensenRoots => MahlerMethod::JensenRoots,
            OneVarMethod::RiemannCyclic { .. } => MahlerMethod::RiemannCyclic,
        };
        return Ok(MahlerEstimate::exact(ln_big(&c), tag));
    }
    match method {
        OneVarMethod::JensenRoots => Ok(jensen(&q)),
        OneVarMethod::RiemannCyclic { n } => {
            let n = usize::try_from(n).map_err(|_| Error::Domain("N too large".into()))?;
            let mut est = torus_grid(&q, n)?;
            est.method = MahlerMethod::RiemannCyclic;
            Ok(est)
        }
    }
}

/// `d/dt` of a one-variable polynomial.
fn derivative(q: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::from_terms(1, q.terms().filter(|(e, _)| e[0] != 0).map(|(e, c)| (vec![e[0] - 1], c * e[0]))).expect("one variable")
}

/// Jensen's formula on the squarefree parts: `q = s g` with
/// `g = gcd(q, q')`, so `m(q) = m(s) + m(g)` and `s` has simple roots.
/// Repeated roots on the circle would otherwise cost `eps^(1/k)`.
fn jensen<F: Real>(q: &LaurentPoly) -> MahlerEstimate<F> {
    let mut f = q.clone();
    let mut est = MahlerEstimate::exact(F::zero(), MahlerMethod::JensenRoots);
    loop {
        let g = gcd(&f, &derivative(&f)).expect("one variable");
        let s = compress(&f.div_exact(&g).expect("gcd divides"));
        let part = jensen_simple::<F>(&s);
        est.value = est.value + part.value;
        est.error_budget = est.error_budget + part.error_budget;
        est.samples += part.samples;
        let g = compress(&g);
        if g.num_vars() == 0 {
            est.value = est.value + ln_big::<F>(&g.constant_term());
            return est;
        }
        f = g;
    }
}

/// Jensen's formula `m(P) = log|a_d| + sum log max(1, |root|)`.
fn jensen_simple<F: Real>(q: &LaurentPoly) -> MahlerEstimate<F> {
    if q.num_vars() == 0 {
        return MahlerEstimate::exact(ln_big(&q.constant_term()), MahlerMethod::JensenRoots);
    }
    let coeffs = q.univariate_coeffs().expect("one variable");
    let d = coeffs.len() - 1;
    let lead = &coeffs[d];
    let mut value = ln_big::<F>(lead);
    if d > 0 {
        let c: Vec<Complex<F>> = coeffs.iter().map(|x| Complex::new(ratio(x, lead), F::zero())).collect();
        for r in polynomial_roots(&c) {
            value = value + safe_ln(r.norm()).max(F::zero());
        }
    }
    MahlerEstimate { value, method: MahlerMethod::JensenRoots, error_budget: jensen_budget(d), samples: d as u64, zeros_skipped: 0 }
}

/// `m(P)` for any number of variables.
pub fn mahler_multivariate<F: Real>(p: &LaurentPoly, strategy: &Strategy) -> Result<MahlerEstimate<F>> {
    check_nonzero(p)?;
    match strategy {
        Strategy::Auto => {
            let q = compress(p);
            match q.num_vars() {
                0 | 1 => mahler_one_var(&q, OneVarMethod::JensenRoots),
                m => fibered_jensen(&q, default_fibered_grid(m)),
            }
        }
        Strategy::TorusGrid { n } => {
            let q = compress(p);
            if q.num_vars() == 0 {
                return Ok(MahlerEstimate::exact(ln_big(&q.constant_term()), MahlerMethod::TorusGrid));
            }
            torus_grid(&q, *n)
        }
        Strategy::FiberedJensen { n } => {
            let q = compress(p);
            if q.num_vars() <= 1 {
                let mut est = mahler_one_var(&q, OneVarMethod::JensenRoots)?;
                est.method = MahlerMethod::FiberedJensen;
                return Ok(est);
            }
            fibered_jensen(&q, *n)
        }
        Strategy::BoydLawton { direction, p: prime } => {
            let v = match direction {
                Some(v) => v.clone(),
                None => gpm_weights(p.num_vars(), *prime)?,
            };
            boyd_lawton(p, &v)
        }
        Strategy::GpmSequence { p: prime, moduli } => gpm_sequence(p, *prime, moduli),
    }
}

/// `(r_1, ..., r_m)` with `r_i` the product of the `G_{p,M}` primes other
/// than `p_i`.
pub fn gpm_weights(m: usize, p: u64) -> Result<Vec<i64>> {
    let primes = next_primes(p, m)?;
    (0..m)
        .map(|i| primes.iter().enumerate().filter(|&(j, _)| j != i).try_fold(1i64, |acc, (_, &q)| acc.checked_mul(q as i64)))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Domain("prime weights overflow i64".into()))
}

/// `m(P(X^{v_1}, ..., X^{v_m}))`.
pub fn boyd_lawton<F: Real>(p: &LaurentPoly, v: &[i64]) -> Result<MahlerEstimate<F>> {
    check_nonzero(p)?;
    let q = p.specialize_along_vector(v)?;
    if q.is_zero() {
        return Err(Error::Domain(format!("{p} specializes to zero along {v:?}")));
    }
    let spread = q.total_degree_spread() as usize;
    let mut est = if spread <= BOYD_LAWTON_ROOT_DEGREE {
        mahler_one_var(&q, OneVarMethod::JensenRoots)?
    } else {
        mahler_one_var(&q, OneVarMethod::RiemannCyclic { n: 16 * spread as u64 })?
    };
    est.method = MahlerMethod::BoydLawton;
    Ok(est)
}

/// `(1/[G:H]) sum_{z in H^perp, P(z) != 0} log|P(z)|`, with the sample and
/// zero counts.
pub fn character_average<F: Real>(p: &LaurentPoly, h: &Sublattice) -> Result<(F, u64, u64)> {
    check_nonzero(p)?;
    if p.num_vars() != h.rank() {
        return Err(Error::Dimension(format!("{}-variable polynomial on a rank {} lattice", p.num_vars(), h.rank())));
    }
    let exponent = h.elementary_divisors().iter().copied().max().unwrap_or(1);
    let table = root_table::<F>(exponent);
    let ev = Evaluator::new(p);
    let chars = h.dual_characters();
    let (sum, skipped) = ordered_sum(chars.len(), |i| {
        let z = &chars[i];
        let scale = exponent / z.order();
        let k: Vec<u64> = z.numerators().iter().map(|&a| a * scale).collect();
        ev.log_abs(&k, exponent, &table)
    });
    Ok((sum / F::of(h.index() as f64), h.index(), skipped))
}

fn gpm_sequence<F: Real>(p: &LaurentPoly, prime: u64, moduli: &[u64]) -> Result<MahlerEstimate<F>> {
    let m = p.num_vars();
    let &last = moduli.last().ok_or_else(|| Error::Domain("empty G_{p,M} schedule".into()))?;
    let mut values = Vec::new();
    let mut samples = 0;
    let mut zeros = 0;
    let mut schedule: Vec<u64> = moduli.to_vec();
    if schedule.len() == 1 && last >= 2 {
        schedule.insert(0, last / 2);
    }
    for &modulus in &schedule {
        let (h, _) = construct_gpm(m, prime, modulus)?;
        let (v, s, z) = character_average::<F>(p, &h)?;
        values.push(v);
        samples += s;
        zeros += z;
    }
    let value = *values.last().unwrap();
    let budget = if values.len() >= 2 { (value - values[values.len() - 2]).abs() } else { F::infinity() };
    Ok(MahlerEstimate { value, method: MahlerMethod::GpmSequence, error_budget: budget, samples, zeros_skipped: zeros })
}

fn grid_size(n: usize, dims: usize) -> Result<usize> {
    let total = (n as u128).checked_pow(dims as u32).filter(|&t| t <= MAX_SAMPLES as u128);
    total.map(|t| t as usize).ok_or_else(|| Error::Domain(format!("grid {n}^{dims} exceeds {MAX_SAMPLES} points")))
}

/// Riemann sum of `log|P|` over the `n^m` grid, skipping exact zeros.
fn torus_sum<F: Real>(q: &LaurentPoly, n: usize) -> Result<(F, u64, u64)> {
    if n == 0 {
        return Err(Error::Domain("grid size must be positive".into()));
    }
    let m = q.num_vars();
    let total = grid_size(n, m)?;
    let table = root_table::<F>(n as u64);
    let ev = Evaluator::new(q);
    let (sum, skipped) = ordered_sum(total, |i| ev.log_abs(&grid_point(i, n, m), n as u64, &table));
    Ok((sum / F::of_usize(total), total as u64, skipped))
}

fn torus_grid<F: Real>(q: &LaurentPoly, n: usize) -> Result<MahlerEstimate<F>> {
    let (value, samples, zeros) = torus_sum::<F>(q, n)?;
    let budget = if n >= 2 { (value - torus_sum::<F>(q, n / 2)?.0).abs() } else { F::infinity() };
    Ok(MahlerEstimate { value, method: MahlerMethod::TorusGrid, error_budget: budget, samples, zeros_skipped: zeros })
}

/// `P` as a polynomial in variable `j` with coefficients in the others.
struct Fibration<'a, F: Real> {
    /// Ascending exponents in the fiber variable.
    coeffs: Vec<Evaluator<'a, F>>,
    dims: usize,
}

fn split_fiber(q: &LaurentPoly, j: usize) -> Vec<LaurentPoly> {
    let m = q.num_vars();
    let lo = q.min_exponents()[j];
    let hi = q.max_exponents()[j];
    let mut parts = vec![LaurentPoly::zero(m - 1); (hi - lo + 1) as usize];
    for (e, c) in q.terms() {
        let rest: Vec<i64> = e.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &x)| x).collect();
        let slot = (e[j] - lo) as usize;
        parts[slot] = &parts[slot] + &LaurentPoly::monomial(m - 1, rest, c.clone());
    }
    parts
}

impl<F: Real> Fibration<'_, F> {
    /// `m` of the fiber polynomial over the grid point `k / n`, or `None`
    /// when the fiber vanishes identically.
    fn fiber_measure(&self, k: &[u64], n: u64, table: &[Complex<F>]) -> Option<F> {
        let vals: Vec<Complex<F>> = self.coeffs.iter().map(|ev| ev.eval(k, n, table)).collect();
        let live = |i: usize| !self.coeffs[i].vanishes(k, n, vals[i]);
        let lo = (0..vals.len()).find(|&i| live(i))?;
        let hi = (lo..vals.len()).rev().find(|&i| live(i)).unwrap();
        let lead = vals[hi];
        let mut m = safe_ln(lead.norm());
        if hi > lo {
            let c: Vec<Complex<F>> = vals[lo..=hi].iter().map(|&v| v / lead).collect();
            for r in polynomial_roots(&c) {
                m = m + safe_ln(r.norm()).max(F::zero());
            }
        }
        Some(m)
    }

    fn average(&self, n: usize) -> Result<(F, u64, u64)> {
        let total = grid_size(n, self.dims)?;
        let table = root_table::<F>(n as u64);
        let (sum, skipped) = ordered_sum(total, |i| self.fiber_measure(&grid_point(i, n, self.dims), n as u64, &table));
        Ok((sum / F::of_usize(total), total as u64, skipped))
    }
}

/// Jensen in the variable of least degree, Riemann sums in the others. The
/// fiber measure is continuous in the base point, so the grid converges much
/// faster than a full torus grid.
fn fibered_jensen<F: Real>(q: &LaurentPoly, n: usize) -> Result<MahlerEstimate<F>> {
    if n == 0 {
        return Err(Error::Domain("grid size must be positive".into()));
    }
    let lo = q.min_exponents();
    let hi = q.max_exponents();
    let j = (0..q.num_vars()).min_by_key(|&j| hi[j] - lo[j]).expect("at least two variables");
    let parts = split_fiber(q, j);
    let degree = parts.len() - 1;
    let fib = Fibration::<F> { coeffs: parts.iter().map(Evaluator::new).collect(), dims: q.num_vars() - 1 };
    let (value, samples, zeros) = fib.average(n)?;
    let coarse = if n >= 2 { fib.average(n / 2)?.0 } else { F::infinity() };
    Ok(MahlerEstimate {
        value,
        method: MahlerMethod::FiberedJensen,
        error_budget: (value - coarse).abs() + jensen_budget::<F>(degree),
        samples,
        zeros_skipped: zeros,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn golden() -> f64 {
        2.0 * ((1.0 + 5f64.sqrt()) / 2.0).ln()
    }

    #[test]
    fn one_var_examples() {
        let unit: MahlerEstimate<f64> = mahler_one_var(&p("t1"), OneVarMethod::JensenRoots).unwrap();
        assert_eq!(unit.value, 0.0);
        let two: MahlerEstimate<f64> = mahler_one_var(&p("2"), OneVarMethod::JensenRoots).unwrap();
        assert!((two.value - 2f64.ln()).abs() < 1e-15);
        let fig8: MahlerEstimate<f64> = mahler_one_var(&p("t1^2 - 3*t1 + 1"), OneVarMethod::JensenRoots).unwrap();
        assert!((fig8.value - golden()).abs() < 1e-12);
        assert!(mahler_one_var::<f64>(&LaurentPoly::zero(1), OneVarMethod::JensenRoots).is_err());
    }

    #[test]
    fn repeated_roots_on_the_circle() {
        let q = p("1 - 4*t1 + 6*t1^2 - 4*t1^3 + t1^4");
        assert_eq!(mahler_one_var::<f64>(&q, OneVarMethod::JensenRoots).unwrap().value, 0.0);
        let q = (p("1 + t1").pow(2) * p("1 + t1^2")).scale(&4.into()).pow(2);
        let v = mahler_one_var::<f64>(&q, OneVarMethod::JensenRoots).unwrap().value;
        assert!((v - 4.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn riemann_agrees_with_jensen() {
        let r: MahlerEstimate<f64> = mahler_one_var(&p("t1^2 - 3*t1 + 1"), OneVarMethod::RiemannCyclic { n: 1000 }).unwrap();
        assert!((r.value - golden()).abs() < 1e-10);
        // 1 + t vanishes at -1; the zero is skipped.
        let r: MahlerEstimate<f64> = mahler_one_var(&p("1 + t1"), OneVarMethod::RiemannCyclic { n: 64 }).unwrap();
        assert_eq!(r.zeros_skipped, 1);
        assert!(r.value.abs() < 0.1);
    }

    #[test]
    fn large_coefficients() {
        // (10^40) * (t - 2): measure 40 log 10 + log 2.
        let q = LaurentPoly::from_terms(1, vec![(vec![1], BigInt::from(10).pow(40)), (vec![0], -BigInt::from(10).pow(40) * 2)]).unwrap();
        let e: MahlerEstimate<f64> = mahler_one_var(&q, OneVarMethod::JensenRoots).unwrap();
        assert!((e.value - (40.0 * 10f64.ln() + 2f64.ln())).abs() < 1e-10);
    }

    #[test]
    fn multivariate_examples() {
        let oracle = 0.3230659472194505;
        let unit: MahlerEstimate<f64> = mahler_multivariate(&p("t1*t2"), &Strategy::Auto).unwrap();
        assert_eq!(unit.value, 0.0);
        let e: MahlerEstimate<f64> = mahler_multivariate(&p("1 + t1 + t2"), &Strategy::Auto).unwrap();
        assert_eq!(e.method, MahlerMethod::FiberedJensen);
        assert!((e.value - oracle).abs() < 1e-6, "{}", e.value);
        let g: MahlerEstimate<f64> = mahler_multivariate(&p("1 + t1 + t2"), &Strategy::TorusGrid { n: 512 }).unwrap();
        assert!((g.value - oracle).abs() < 1e-3);
        let fubini = LaurentPoly::parse_with_vars("t1^2 - 3*t1 + 1", 2).unwrap();
        let f: MahlerEstimate<f64> = mahler_multivariate(&fubini, &Strategy::Auto).unwrap();
        assert!((f.value - golden()).abs() < 1e-12);
        let t: MahlerEstimate<f64> = mahler_multivariate(&fubini, &Strategy::TorusGrid { n: 64 }).unwrap();
        assert!((t.value - golden()).abs() < 1e-10);
    }

    #[test]
    fn boyd_lawton_and_gpm() {
        let oracle = 0.3230659472194505;
        let q = p("1 + t1 + t2");
        let bl: MahlerEstimate<f64> = mahler_multivariate(&q, &Strategy::BoydLawton { direction: None, p: 23 }).unwrap();
        assert!((bl.value - oracle).abs() < 0.01, "{}", bl.value);
        let g: MahlerEstimate<f64> = mahler_multivariate(&q, &Strategy::GpmSequence { p: 5, moduli: vec![200, 1000] }).unwrap();
        assert!((g.value - oracle).abs() < 0.05, "{}", g.value);
    }

    #[test]
    fn method_names_round_trip() {
        for m in MahlerMethod::ALL {
            assert_eq!(m.name().parse::<MahlerMethod>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.name()));
        }
        assert!("simpson".parse::<MahlerMethod>().is_err());
    }

    #[test]
    fn single_precision_estimate() {
        let e: MahlerEstimate<f32> = mahler_one_var(&p("t1^2 - 3*t1 + 1"), OneVarMethod::JensenRoots).unwrap();
        assert!((e.value as f64 - golden()).abs() < 1e-5);
    }
}
