//! Integral domains with exact division, and dense univariate polynomials
//! over them: pseudo-remainders, subresultant gcd, resultants, and
//! fraction-free (Bareiss) determinants.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::LaurentPoly;

/// Integral domain with exact division.
pub trait ExactRing: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// `Some(self / o)` when `o` divides `self`.
    fn div_exact_ref(&self, o: &Self) -> Option<Self>;

    fn pow_ref(&self, k: usize) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
}

impl ExactRing for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn div_exact_ref(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(o);
        r.is_zero().then_some(q)
    }
}

impl ExactRing for LaurentPoly {
    fn zero_like(&self) -> Self {
        LaurentPoly::zero(self.num_vars())
    }
    fn one_like(&self) -> Self {
        LaurentPoly::one(self.num_vars())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn div_exact_ref(&self, o: &Self) -> Option<Self> {
        self.div_exact(o)
    }
}

/// Dense univariate polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<R: ExactRing> {
    pub coeffs: Vec<R>,
}

impl<R: ExactRing> UPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero_elem()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> &R {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.mul_ref(c)).collect())
    }

    fn div_scalar(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.div_exact_ref(c).expect("inexact division in polynomial remainder sequence")).collect())
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn prem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo-division by zero");
        let Some(da) = self.degree() else {
            return self.clone();
        };
        if da < db {
            return self.clone();
        }
        let lb = b.lc().clone();
        let mut r = self.coeffs.clone();
        let mut e = da - db + 1;
        let mut dr = da as isize;
        while dr >= db as isize {
            let dru = dr as usize;
            let lr = r[dru].clone();
            for x in r.iter_mut().take(dru + 1) {
                *x = x.mul_ref(&lb);
            }
            if !lr.is_zero_elem() {
                let off = dru - db;
                for (j, bj) in b.coeffs.iter().enumerate() {
                    r[off + j] = r[off + j].sub_ref(&lr.mul_ref(bj));
                }
            }
            e -= 1;
            r.truncate(dru);
            dr -= 1;
        }
        let f = lb.pow_ref(e);
        Self::new(r).scale(&f)
    }
}

/// Content (gcd of coefficients) and primitive part, given a gcd on `R`.
pub fn content_and_primitive<R: ExactRing>(p: &UPoly<R>, gcd: &mut impl FnMut(&R, &R) -> R) -> (R, UPoly<R>) {
    let mut it = p.coeffs.iter();
    let first = it.next().expect("content of zero polynomial").clone();
    let mut g = first;
    for c in it {
        g = gcd(&g, c);
    }
    let pp = p.div_scalar(&g);
    (g, pp)
}

/// Subresultant gcd of two nonzero polynomials; the result is a gcd up to a
/// factor from `R` (callers take the primitive part).
pub fn subresultant_gcd<R: ExactRing>(a: &UPoly<R>, b: &UPoly<R>) -> UPoly<R> {
    let (mut a, mut b) = if a.degree() >= b.degree() { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    let one = a.lc().one_like();
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        let delta = a.degree().unwrap() - b.degree().unwrap();
        let r = a.prem(&b);
        if r.is_zero() {
            return b;
        }
        if r.degree() == Some(0) {
            return UPoly::new(vec![one]);
        }
        a = b;
        b = r.div_scalar(&g.mul_ref(&h.pow_ref(delta)));
        g = a.lc().clone();
        h = if delta == 0 { h } else { g.pow_ref(delta).div_exact_ref(&h.pow_ref(delta - 1)).expect("inexact subresultant coefficient") };
    }
}

/// Resultant of two integer polynomials by the subresultant algorithm.
pub fn resultant(a: &UPoly<BigInt>, b: &UPoly<BigInt>) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
    if db == 0 {
        return b.lc().pow_ref(da);
    }
    if da == 0 {
        return a.lc().pow_ref(db);
    }
    let mut int_gcd = |x: &BigInt, y: &BigInt| x.gcd(y);
    let (ca, mut a) = content_and_primitive(a, &mut int_gcd);
    let (cb, mut b) = content_and_primitive(b, &mut int_gcd);
    let t = ca.pow_ref(db) * cb.pow_ref(da);
    let mut s = BigInt::one();
    if da < db {
        std::mem::swap(&mut a, &mut b);
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = a.prem(&b);
        a = b;
        if r.is_zero() {
            return BigInt::zero();
        }
        b = r.div_scalar(&(&g * h.pow_ref(delta)));
        g = a.lc().clone();
        h = if delta == 0 { h } else { g.pow_ref(delta).div_exact_ref(&h.pow_ref(delta - 1)).expect("inexact subresultant coefficient") };
        if b.degree() == Some(0) {
            break;
        }
    }
    let da = a.degree().unwrap();
    let h = b.lc().pow_ref(da).div_exact_ref(&h.pow_ref(da - 1)).expect("inexact final subresultant");
    s * t * h
}

/// Determinant by Bareiss fraction-free elimination with row pivoting.
pub fn bareiss_det<R: ExactRing>(mut m: Vec<Vec<R>>, zero: &R) -> R {
    let n = m.len();
    if n == 0 {
        return zero.one_like();
    }
    let mut sign_neg = false;
    let mut prev = zero.one_like();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !m[i][k].is_zero_elem()) else {
            return zero.zero_like();
        };
        if piv != k {
            m.swap(piv, k);
            sign_neg = !sign_neg;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul_ref(&m[i][j]).sub_ref(&m[i][k].mul_ref(&m[k][j]));
                m[i][j] = num.div_exact_ref(&prev).expect("Bareiss step is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_neg {
        d.neg_ref()
    } else {
        d
    }
}

/// Rank by fraction-free elimination with full pivot search.
pub fn bareiss_rank<R: ExactRing>(mut m: Vec<Vec<R>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev: Option<R> = None;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| !m[i][c].is_zero_elem()) else {
            continue;
        };
        m.swap(piv, rank);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let num = m[rank][c].mul_ref(&m[i][j]).sub_ref(&m[i][c].mul_ref(&m[rank][j]));
                m[i][j] = match &prev {
                    Some(p) => num.div_exact_ref(p).expect("Bareiss step is exact"),
                    None => num,
                };
            }
            m[i][c] = m[i][c].zero_like();
        }
        prev = Some(m[rank][c].clone());
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UPoly<BigInt> {
        UPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Sylvester-matrix determinant, independent of the PRS machinery
    /// (cofactor expansion on small matrices).
    fn sylvester_resultant(a: &[i64], b: &[i64]) -> BigInt {
        let (da, db) = (a.len() - 1, b.len() - 1);
        let n = da + db;
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for i in 0..db {
            for (j, &c) in a.iter().rev().enumerate() {
                m[i][i + j] = BigInt::from(c);
            }
        }
        for i in 0..da {
            for (j, &c) in b.iter().rev().enumerate() {
                m[db + i][i + j] = BigInt::from(c);
            }
        }
        cofactor_det(&m)
    }

    fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> =
                m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect();
            let term = &m[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn resultant_matches_sylvester() {
        let cases: &[(&[i64], &[i64])] = &[
            (&[1, -3, 1], &[-1, 0, 0, 0, 0, 1]),
            (&[2, 0, 1], &[3, 1]),
            (&[1, 1], &[-1, 1]),
            (&[5, -2, 0, 3], &[1, 4, -1]),
            (&[0, 2, 4], &[6, 3]),
            (&[-1, 0, 0, 1], &[1, 1, 1]),
        ];
        for (a, b) in cases {
            assert_eq!(resultant(&up(a), &up(b)), sylvester_resultant(a, b), "{a:?} {b:?}");
        }
    }

    #[test]
    fn resultant_of_figure_eight_with_cyclotomic_side() {
        // |Res(t^2-3t+1, t^5-1)| = 121
        let r = resultant(&up(&[1, -3, 1]), &up(&[-1, 0, 0, 0, 0, 1]));
        assert_eq!(num_traits::Signed::abs(&r), BigInt::from(121));
    }

    #[test]
    fn bareiss_det_and_rank() {
        let m: Vec<Vec<BigInt>> = [[2, 0, 1], [1, 3, 2], [1, 1, 1]].iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        assert_eq!(bareiss_det(m.clone(), &BigInt::zero()), cofactor_det(&m));
        let sing: Vec<Vec<BigInt>> =
            [[1, 2, 3], [2, 4, 6], [0, 1, 1]].iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        assert!(bareiss_det(sing.clone(), &BigInt::zero()).is_zero());
        assert_eq!(bareiss_rank(sing), 2);
    }

    #[test]
    fn prem_with_skipped_degrees() {
        // a = x^4 + 1, b = 2x^2 + 1
        let a = up(&[1, 0, 0, 0, 1]);
        let b = up(&[1, 0, 2]);
        // lc(b)^3 * a = 8x^4 + 8 ; 8x^4+8 mod (2x^2+1) = 8 - ... compute over Q:
        // x^4 = (x^2)^2 = 1/4 so remainder of a is 5/4, times 8 -> 10
        assert_eq!(a.prem(&b), up(&[10]));
    }
}
