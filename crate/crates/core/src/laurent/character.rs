//! Torsion points of the torus and evaluation of Laurent polynomials at them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ring::{resultant, UPoly};
use super::LaurentPoly;
use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real};

/// The point `(e^{2 pi i a_1}, ..., e^{2 pi i a_m})` with rational angles
/// `a_j = numerators[j] / order` in `[0, 1)`.
///
/// `order` is the least common denominator, so it is also the multiplicative
/// order of the point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CharacterPoint {
    numerators: Vec<u64>,
    order: u64,
}

impl CharacterPoint {
    /// Angles `numerators[j] / denominator` (taken mod 1), reduced to the
    /// least common denominator.
    pub fn new(numerators: &[i64], denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::Domain("character denominator must be positive".into()));
        }
        let d = denominator as i64;
        let nums: Vec<u64> = numerators.iter().map(|&a| a.rem_euclid(d) as u64).collect();
        let g = nums.iter().fold(denominator, |g, &a| g.gcd(&a));
        Ok(Self { numerators: nums.iter().map(|a| a / g).collect(), order: denominator / g })
    }

    pub fn from_angles(angles: &[Ratio<i64>]) -> Result<Self> {
        let lcm = angles.iter().fold(1i64, |l, a| l.lcm(a.denom()));
        let nums: Vec<i64> = angles.iter().map(|a| a.numer() * (lcm / a.denom())).collect();
        Self::new(&nums, lcm as u64)
    }

    pub fn trivial(num_vars: usize) -> Self {
        Self { numerators: vec![0; num_vars], order: 1 }
    }

    pub fn num_vars(&self) -> usize {
        self.numerators.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    pub fn angles(&self) -> Vec<Ratio<u64>> {
        self.numerators.iter().map(|&a| Ratio::new(a, self.order)).collect()
    }

    /// Exponent `k` (mod order) such that `t^e` evaluates to `e^{2 pi i k / order}`.
    pub fn phase_of(&self, e: &[i64]) -> u64 {
        let n = self.order as i128;
        let s: i128 = e.iter().zip(&self.numerators).map(|(&x, &a)| x as i128 * a as i128).sum();
        s.rem_euclid(n) as u64
    }

    /// Value of the character on the group element `v`, as a point on the
    /// unit circle.
    pub fn value_at<F: Real>(&self, v: &[i64]) -> Complex<F> {
        unit_root(self.phase_of(v), self.order)
    }
}

/// `e^{2 pi i k / n}`, exact at the quarter turns.
pub fn unit_root<F: Real>(k: u64, n: u64) -> Complex<F> {
    let k = k % n;
    let (k4, n) = (k as u128 * 4, n as u128);
    if k4 == 0 {
        Complex::new(F::one(), F::zero())
    } else if k4 == n {
        Complex::new(F::zero(), F::one())
    } else if k4 == 2 * n {
        Complex::new(-F::one(), F::zero())
    } else if k4 == 3 * n {
        Complex::new(F::zero(), -F::one())
    } else {
        let theta = F::of(2.0) * F::PI() * (F::of(k as f64) / F::of(n as f64));
        Complex::new(theta.cos(), theta.sin())
    }
}

impl LaurentPoly {
    /// Floating-point value at a torus torsion point.
    pub fn evaluate_at_character<F: Real>(&self, z: &CharacterPoint) -> Complex<F> {
        assert_eq!(z.num_vars(), self.num_vars(), "character dimension must match num_vars");
        let mut re = CompensatedSum::<F>::default();
        let mut im = CompensatedSum::<F>::default();
        for (e, c) in self.terms() {
            let w: Complex<F> = unit_root(z.phase_of(e), z.order());
            let c = F::of_big(c);
            re.add(c * w.re);
            im.add(c * w.im);
        }
        Complex::new(re.value(), im.value())
    }

    /// Exact test for `p(z) = 0`.
    ///
    /// A floating-point evaluation with a rigorous error bound certifies
    /// nonvanishing quickly; otherwise `t_j -> X^(n a_j)` is substituted,
    /// reduced mod `X^n - 1`, and divisibility by the `n`-th cyclotomic
    /// polynomial is checked over the integers.
    pub fn is_zero_at_character(&self, z: &CharacterPoint) -> bool {
        assert_eq!(z.num_vars(), self.num_vars(), "character dimension must match num_vars");
        if self.is_zero() {
            return true;
        }
        if certified_nonzero(self, z) {
            return false;
        }
        vanishes_exactly(self, z)
    }
}

/// Absolute error bound for `evaluate_at_character::<f64>`; generous by a
/// factor of several hundred over the worst case of term-wise rounding.
fn f64_error_bound(p: &LaurentPoly) -> f64 {
    let l1 = p.l1_norm().to_f64().unwrap_or(f64::INFINITY);
    1024.0 * (p.num_terms() as f64 + 4.0) * f64::EPSILON * l1
}

pub(crate) fn certified_nonzero(p: &LaurentPoly, z: &CharacterPoint) -> bool {
    let v: Complex<f64> = p.evaluate_at_character(z);
    let bound = f64_error_bound(p);
    bound.is_finite() && v.norm() > bound
}

fn vanishes_exactly(p: &LaurentPoly, z: &CharacterPoint) -> bool {
    let n = z.order() as usize;
    let mut c = vec![BigInt::zero(); n];
    for (e, coeff) in p.terms() {
        c[z.phase_of(e) as usize] += coeff;
    }
    if c.iter().all(|x| x.is_zero()) {
        return true;
    }
    let phi = cyclotomic(n as u64);
    let d = phi.len() - 1;
    for i in (d..n).rev() {
        if c[i].is_zero() {
            continue;
        }
        let q = std::mem::take(&mut c[i]);
        for (j, pj) in phi.iter().enumerate().take(d) {
            if *pj != 0 {
                c[i - d + j] -= &q * pj;
            }
        }
    }
    c[..d.min(n)].iter().all(|x| x.is_zero())
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, ascending.
pub fn cyclotomic(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let p = Arc::new(compute_cyclotomic(n));
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn compute_cyclotomic(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // Phi_n = prod_{d | n} (X^d - 1)^{mu(n/d)}: multiply the mu = +1 factors,
    // then divide out the mu = -1 factors.
    let divisors: Vec<u64> = (1..=n).filter(|&d| n.is_multiple_of(d)).collect();
    let mut num: Vec<BigInt> = vec![BigInt::from(1)];
    let mut den: Vec<u64> = Vec::new();
    for &d in &divisors {
        match mobius(n / d) {
            1 => num = mul_xd_minus_one(&num, d as usize),
            -1 => den.push(d),
            _ => {}
        }
    }
    for d in den {
        num = div_xd_minus_one(&num, d as usize);
    }
    num.iter().map(|c| c.to_i64().expect("cyclotomic coefficient fits in i64")).collect()
}

fn mobius(mut n: u64) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn mul_xd_minus_one(p: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + d];
    for (i, c) in p.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

fn div_xd_minus_one(p: &[BigInt], d: usize) -> Vec<BigInt> {
    // q * (X^d - 1) = p  =>  q_i = q_{i-d} - p_i, solved from the bottom.
    let qlen = p.len() - d;
    let mut q = vec![BigInt::zero(); qlen];
    for i in 0..qlen {
        let prev = if i >= d { q[i - d].clone() } else { BigInt::zero() };
        q[i] = prev - &p[i];
    }
    debug_assert!((0..d).all(|j| {
        let hi = qlen + j;
        let expect = if hi >= d && hi - d < qlen { q[hi - d].clone() } else { BigInt::zero() };
        p[hi] == expect
    }));
    q
}

/// `Res(p, X^N - 1)` for the polynomial part of a one-variable `p`; its
/// absolute value is `prod_{z^N = 1} |p(z)|`, and it is zero exactly when `p`
/// vanishes at an `N`-th root of unity.
pub fn cyclic_resultant(p: &LaurentPoly, n: u64) -> Result<BigInt> {
    if p.is_zero() {
        return Err(Error::Domain("cyclic resultant of the zero polynomial".into()));
    }
    if n == 0 {
        return Err(Error::Domain("cyclic resultant needs N >= 1".into()));
    }
    let a = UPoly::new(p.univariate_coeffs()?);
    let mut xn = vec![BigInt::zero(); n as usize + 1];
    xn[0] = BigInt::from(-1);
    xn[n as usize] = BigInt::from(1);
    Ok(resultant(&a, &UPoly::new(xn)))
}

/// Sign-insensitive helper used by quadrature: `None` when `p(z) = 0`
/// exactly, otherwise `log|p(z)|`.
pub fn log_abs_or_zero<F: Real>(p: &LaurentPoly, z: &CharacterPoint) -> Option<F> {
    let v: Complex<F> = p.evaluate_at_character(z);
    if !certified_nonzero(p, z) && vanishes_exactly(p, z) {
        return None;
    }
    Some(v.norm().ln())
}

impl CharacterPoint {
    /// True when all angles are zero.
    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
}
