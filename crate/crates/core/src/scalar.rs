//! Scalar abstractions.
//!
//! Floating-point code (quadrature, root finding, singular values) is written
//! against [`Real`], so it runs in `f32` or `f64`. Exact linear algebra (Smith
//! normal form) is written against [`ExactInt`], which covers the machine
//! integers and [`num_bigint::BigInt`].

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Float, FloatConst, FromPrimitive, Signed, ToPrimitive};

/// Floating-point scalar used by all numeric routines.
pub trait Real: Float + FloatConst + Signed + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + Sum + 'static {
    /// Lossy conversion from `f64`; exact for values representable in `Self`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in every Real")
    }

    /// Conversion from an exact integer, through its nearest `f64`.
    fn of_big(x: &BigInt) -> Self {
        Self::of(x.to_f64().unwrap_or(f64::INFINITY))
    }

    /// Conversion from a count or index.
    fn of_usize(n: usize) -> Self {
        Self::of(n as f64)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Exact integer scalar for integer matrices and their Smith normal form.
pub trait ExactInt: Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static {
    fn of_i64(x: i64) -> Self {
        <Self as FromPrimitive>::from_i64(x).expect("i64 fits in every ExactInt")
    }

    fn to_bigint(&self) -> BigInt;
}

impl ExactInt for i64 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactInt for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactInt for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Natural logarithm of the absolute value of an arbitrarily large integer.
///
/// Returns `-inf` for zero. Accurate to roughly `f64` precision regardless of
/// the size of `x`.
pub fn big_ln_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 1000 {
        return x.abs().to_f64().unwrap().ln();
    }
    let shift = bits - 60;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().unwrap().ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Neumaier-compensated summation.
#[derive(Clone, Copy, Debug)]
pub struct CompensatedSum<F: Real> {
    sum: F,
    carry: F,
}

impl<F: Real> Default for CompensatedSum<F> {
    fn default() -> Self {
        Self { sum: F::zero(), carry: F::zero() }
    }
}

impl<F: Real> CompensatedSum<F> {
    pub fn add(&mut self, x: F) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.carry);
    }

    pub fn value(&self) -> F {
        self.sum + self.carry
    }
}

impl<F: Real> FromIterator<F> for CompensatedSum<F> {
    fn from_iter<I: IntoIterator<Item = F>>(iter: I) -> Self {
        let mut acc = Self::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
