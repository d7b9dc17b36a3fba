use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent vector of a monomial `t1^e1 * ... * tm^em`.
pub type Exponent = Vec<i64>;

/// Integer Laurent polynomial in `num_vars` variables, i.e. an element of the
/// group ring of a free abelian group of that rank.
///
/// The term map never stores zero coefficients, so structural equality is
/// polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    num_vars: usize,
    terms: BTreeMap<Exponent, BigInt>,
}

impl LaurentPoly {
    pub fn zero(num_vars: usize) -> Self {
        Self { num_vars, terms: BTreeMap::new() }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, BigInt::one())
    }

    pub fn constant(num_vars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(num_vars, vec![0; num_vars], c)
    }

    /// `c * t^exp`. Panics if `exp` has the wrong length.
    pub fn monomial(num_vars: usize, exp: Exponent, c: impl Into<BigInt>) -> Self {
        assert_eq!(exp.len(), num_vars, "exponent length must equal num_vars");
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { num_vars, terms }
    }

    /// The generator `t_{j+1}` (zero-based `j`).
    pub fn var(num_vars: usize, j: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[j] = 1;
        Self::monomial(num_vars, e, 1)
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, combining
    /// repeated exponents.
    pub fn from_terms<I, C>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(Error::Dimension(format!("exponent of length {} in a {}-variable polynomial", e.len(), num_vars)));
            }
            p.add_term(e, c.into());
        }
        Ok(p)
    }

    /// One-variable polynomial `sum c_k X^(low + k)`.
    pub fn from_coeffs(low: i64, coeffs: &[i64]) -> Self {
        let mut p = Self::zero(1);
        for (k, &c) in coeffs.iter().enumerate() {
            p.add_term(vec![low + k as i64], BigInt::from(c));
        }
        p
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &[i64]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// True for `c * t^v` with `c != 0`.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// True for the units `±t^v` of the group ring.
    pub fn is_unit(&self) -> bool {
        self.is_monomial() && self.terms.values().next().unwrap().abs().is_one()
    }

    /// True when this is an integer constant (including zero).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&vec![0; self.num_vars])
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Exponent, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Componentwise minimum of the exponents (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Exponent {
        self.fold_exponents(i64::min)
    }

    /// Componentwise maximum of the exponents (zeros for the zero polynomial).
    pub fn max_exponents(&self) -> Exponent {
        self.fold_exponents(i64::max)
    }

    fn fold_exponents(&self, f: impl Fn(i64, i64) -> i64) -> Exponent {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.num_vars];
        };
        let mut acc = first.clone();
        for e in it {
            for (a, &x) in acc.iter_mut().zip(e) {
                *a = f(*a, x);
            }
        }
        acc
    }

    /// Sum of |coefficients|, the l1 norm.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Total spread `max_exp - min_exp` summed over variables.
    pub fn total_degree_spread(&self) -> i64 {
        let lo = self.min_exponents();
        let hi = self.max_exponents();
        hi.iter().zip(&lo).map(|(h, l)| h - l).sum()
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::Dimension(format!("polynomials in {} and {} variables", self.num_vars, other.num_vars)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    /// Ring product; fails only on mismatched variable counts.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.num_vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        Self { num_vars: self.num_vars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    /// Multiplies by the monomial `t^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        assert_eq!(shift.len(), self.num_vars);
        Self {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.num_vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// The involution `t_j -> t_j^{-1}`.
    pub fn bar(&self) -> Self {
        Self { num_vars: self.num_vars, terms: self.terms.iter().map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone())).collect() }
    }

    /// Shifts so that every exponent is nonnegative and each variable
    /// attains exponent zero. Returns the shifted polynomial and the shift
    /// that was applied.
    pub fn to_polynomial_part(&self) -> (Self, Exponent) {
        let lo = self.min_exponents();
        let neg: Exponent = lo.iter().map(|x| -x).collect();
        (self.shift(&neg), neg)
    }

    /// The representative `u * p` (`u = ±t^v`) with nonnegative exponents,
    /// a zero exponent in every variable, and a positive coefficient on the
    /// lexicographically least exponent. Zero maps to zero.
    pub fn canonical_unit_normal_form(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let (p, _) = self.to_polynomial_part();
        if p.terms.values().next().unwrap().is_negative() {
            -&p
        } else {
            p
        }
    }

    /// True when `self` and `other` differ by a unit `±t^v`.
    pub fn associated(&self, other: &Self) -> bool {
        self.num_vars == other.num_vars && self.canonical_unit_normal_form() == other.canonical_unit_normal_form()
    }

    /// Exact quotient in the Laurent ring, or `None` if `divisor` does not
    /// divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert_eq!(self.num_vars, divisor.num_vars);
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let (d, d_shift) = divisor.to_polynomial_part();
        let (mut r, r_shift) = self.to_polynomial_part();
        // Both are now polynomials not divisible by any variable on the
        // divisor side, so any Laurent quotient is an honest polynomial.
        let (d_lead_e, d_lead_c) = {
            let (e, c) = d.leading_term().unwrap();
            (e.clone(), c.clone())
        };
        let mut q = Self::zero(self.num_vars);
        while let Some((e, c)) = r.leading_term() {
            let (qc, rem) = c.div_rem(&d_lead_c);
            if !rem.is_zero() {
                return None;
            }
            let qe: Exponent = e.iter().zip(&d_lead_e).map(|(a, b)| a - b).collect();
            if qe.iter().any(|&x| x < 0) {
                return None;
            }
            let step = Self::monomial(self.num_vars, qe.clone(), qc.clone());
            r = &r - &(&step * &d);
            q.add_term(qe, qc);
        }
        // self = t^-r_shift * r and divisor = t^-d_shift * d.
        let total: Exponent = r_shift.iter().zip(&d_shift).map(|(a, b)| b - a).collect();
        Some(q.shift(&total))
    }

    /// Integer content: gcd of the coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Substitutes `t_j -> X^{v_j}`, giving a one-variable Laurent polynomial.
    pub fn specialize_along_vector(&self, v: &[i64]) -> Result<Self> {
        if v.len() != self.num_vars {
            return Err(Error::Dimension(format!("direction of length {} for a {}-variable polynomial", v.len(), self.num_vars)));
        }
        let mut out = Self::zero(1);
        for (e, c) in &self.terms {
            let k: i64 = e.iter().zip(v).map(|(a, b)| a * b).sum();
            out.add_term(vec![k], c.clone());
        }
        Ok(out)
    }

    /// Re-embeds into a ring with `num_vars` variables, mapping variable `j`
    /// to `target[j]`.
    pub fn embed(&self, num_vars: usize, target: &[usize]) -> Self {
        assert_eq!(target.len(), self.num_vars);
        let mut out = Self::zero(num_vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; num_vars];
            for (j, &x) in e.iter().enumerate() {
                ne[target[j]] += x;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Dense ascending coefficients of the polynomial part of a one-variable
    /// polynomial, with `coeffs[0] != 0`.
    pub fn univariate_coeffs(&self) -> Result<Vec<BigInt>> {
        if self.num_vars != 1 {
            return Err(Error::Dimension(format!("expected a one-variable polynomial, found {} variables", self.num_vars)));
        }
        let (p, _) = self.to_polynomial_part();
        let deg = p.max_exponents()[0] as usize;
        let mut out = vec![BigInt::zero(); if p.is_zero() { 0 } else { deg + 1 }];
        for (e, c) in &p.terms {
            out[e[0] as usize] = c.clone();
        }
        Ok(out)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{}]({})", self.num_vars, self)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(j, &x)| if x == 1 { format!("t{}", j + 1) } else { format!("t{}^{}", j + 1, x) })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).expect("operands must have the same number of variables")
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, multiply);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { num_vars: self.num_vars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn p2(s: &str) -> LaurentPoly {
        LaurentPoly::parse_with_vars(s, 2).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(p("1 + t1").multiply(&p("1 - t1")).unwrap(), p("1 - t1^2"));
    }

    #[test]
    fn zero_absorbs() {
        let q = p("3 - t1 + 7*t1^4");
        assert!(q.multiply(&LaurentPoly::zero(1)).unwrap().is_zero());
    }

    #[test]
    fn unit_inverse() {
        assert_eq!(p("t1^-1") * p("t1"), LaurentPoly::one(1));
    }

    #[test]
    fn mismatched_vars_is_dimension_error() {
        let err = LaurentPoly::one(1).multiply(&LaurentPoly::one(2)).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }

    #[test]
    fn canonical_form_examples() {
        assert_eq!(p("-t1^2 + 3*t1 - 1").canonical_unit_normal_form(), p("1 - 3*t1 + t1^2"));
        assert_eq!(LaurentPoly::one(1).canonical_unit_normal_form(), LaurentPoly::one(1));
        let m = LaurentPoly::monomial(2, vec![3, -1], 1);
        assert_eq!(m.canonical_unit_normal_form(), LaurentPoly::one(2));
        assert!(LaurentPoly::zero(3).canonical_unit_normal_form().is_zero());
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let q = p("-5*t1^-3*t2 + 2*t2^4 - t1");
        let c = q.canonical_unit_normal_form();
        assert_eq!(c.canonical_unit_normal_form(), c);
        assert_eq!(c.min_exponents(), vec![0, 0]);
    }

    #[test]
    fn specialize_examples() {
        assert_eq!(p("1 + t1 + t2").specialize_along_vector(&[1, 2]).unwrap(), p("1 + t1 + t1^2"));
        assert_eq!(p("t1*t2^-1").specialize_along_vector(&[3, 3]).unwrap(), LaurentPoly::one(1));
        let prod = p2("1 + t1") * p2("1 + t2");
        assert_eq!(prod.specialize_along_vector(&[1, 1]).unwrap(), p("1 + t1").pow(2));
        assert!(p("t1").specialize_along_vector(&[1, 2]).is_err());
    }

    #[test]
    fn exact_division() {
        let a = p("1 - t1^3");
        let b = p("1 - t1");
        assert_eq!(a.div_exact(&b).unwrap(), p("1 + t1 + t1^2"));
        assert!(b.div_exact(&a).is_none());
        assert!(p("1").div_exact(&p("2")).is_none());
        let shifted = p("t1^-5 - t1^-2");
        assert_eq!(shifted.div_exact(&p("t1^2 - t1^5")).unwrap(), p("t1^-7"));
    }

    #[test]
    fn bar_is_involution() {
        let q = p("1 - 2*t1 + t1^-3*t2");
        assert_eq!(q.bar().bar(), q);
        assert_eq!(p("1 - 2*t1").bar(), p("1 - 2*t1^-1"));
    }
}
