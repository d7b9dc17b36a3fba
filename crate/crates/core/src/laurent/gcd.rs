//! Multivariate gcd over the integers.
//!
//! Monomial units are cleared first, then the gcd is computed recursively:
//! view both polynomials as univariate in the first remaining variable with
//! coefficients in the others, split off contents, and run the subresultant
//! remainder sequence on the primitive parts.

use num_bigint::BigInt;
use num_integer::Integer;

use super::ring::{content_and_primitive, subresultant_gcd, UPoly};
use super::LaurentPoly;
use crate::error::{Error, Result};

/// Greatest common divisor in canonical unit form. `gcd(0, q)` is
/// `canonical(q)` and `gcd(0, 0) = 0`.
pub fn gcd(p: &LaurentPoly, q: &LaurentPoly) -> Result<LaurentPoly> {
    if p.num_vars() != q.num_vars() {
        return Err(Error::Dimension(format!("gcd of polynomials in {} and {} variables", p.num_vars(), q.num_vars())));
    }
    if p.is_zero() {
        return Ok(q.canonical_unit_normal_form());
    }
    if q.is_zero() {
        return Ok(p.canonical_unit_normal_form());
    }
    let (a, _) = p.to_polynomial_part();
    let (b, _) = q.to_polynomial_part();
    Ok(poly_gcd(&a, &b, 0).canonical_unit_normal_form())
}

/// Gcd of a finite family; zero for an empty family.
pub fn gcd_many<'a>(num_vars: usize, items: impl IntoIterator<Item = &'a LaurentPoly>) -> Result<LaurentPoly> {
    let mut g = LaurentPoly::zero(num_vars);
    for p in items {
        g = gcd(&g, p)?;
        if g.is_unit() {
            break;
        }
    }
    Ok(g)
}

/// Gcd of two polynomials (nonnegative exponents) that only involve the
/// variables `var..num_vars`.
fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly, var: usize) -> LaurentPoly {
    let n = a.num_vars();
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if var == n {
        let g: BigInt = a.constant_term().gcd(&b.constant_term());
        return LaurentPoly::constant(n, g);
    }
    let ua = split(a, var);
    let ub = split(b, var);
    let mut coeff_gcd = |x: &LaurentPoly, y: &LaurentPoly| poly_gcd(x, y, var + 1);
    let (ca, pa) = content_and_primitive(&ua, &mut coeff_gcd);
    let (cb, pb) = content_and_primitive(&ub, &mut coeff_gcd);
    let c = poly_gcd(&ca, &cb, var + 1);
    let g = subresultant_gcd(&pa, &pb);
    let (_, gp) = content_and_primitive(&g, &mut coeff_gcd);
    &c * &join(&gp, var)
}

/// Writes `p` as a polynomial in variable `var`.
fn split(p: &LaurentPoly, var: usize) -> UPoly<LaurentPoly> {
    let n = p.num_vars();
    let deg = p.max_exponents()[var] as usize;
    let mut coeffs = vec![LaurentPoly::zero(n); deg + 1];
    for (e, c) in p.terms() {
        let mut rest = e.clone();
        let k = rest[var] as usize;
        rest[var] = 0;
        coeffs[k].add_term(rest, c.clone());
    }
    UPoly::new(coeffs)
}

fn join(u: &UPoly<LaurentPoly>, var: usize) -> LaurentPoly {
    let n = u.coeffs.first().map(|c| c.num_vars()).unwrap_or(1);
    let mut out = LaurentPoly::zero(n);
    for (k, c) in u.coeffs.iter().enumerate() {
        let mut shift = vec![0; n];
        shift[var] = k as i64;
        out = &out + &c.shift(&shift);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn common_factor() {
        assert_eq!(gcd(&p("t1^2 - 1"), &p("t1 - 1")).unwrap(), p("t1 - 1").canonical_unit_normal_form());
    }

    #[test]
    fn gcd_with_zero() {
        let q = p("-t1^-1 + 3 - t1");
        assert_eq!(gcd(&q, &LaurentPoly::zero(1)).unwrap(), q.canonical_unit_normal_form());
        assert!(gcd(&LaurentPoly::zero(2), &LaurentPoly::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn two_variable_example() {
        // 2t1t2 - 2 = 2(t1t2 - 1); 4t1 - 4t2^-1*t1*t2 = 0?  The second input
        // simplifies: t2^-1 * t1 * t2 = t1, so 4t1 - 4t1 = 0 and the gcd is
        // canonical(first).
        let a = p("2*t1*t2 - 2");
        let b = LaurentPoly::parse_with_vars("4*t1", 2).unwrap() - p("4*t1*t2^-1*t2");
        let g = gcd(&a, &b).unwrap();
        assert_eq!(g, p("2*t1*t2 - 2").canonical_unit_normal_form());
        assert!(a.div_exact(&g).is_some());
    }

    #[test]
    fn two_variable_nontrivial() {
        let r = p("1 + t1 + t2");
        let a = &r * &p("2 - t1*t2^2");
        let b = &r * &p("3*t1 + t2^3");
        let g = gcd(&a, &b).unwrap();
        assert_eq!(g, r.canonical_unit_normal_form());
    }

    #[test]
    fn integer_contents_combine() {
        let g = gcd(&p("6*t1 + 6"), &p("4*t1^2 - 4")).unwrap();
        assert_eq!(g, p("2 + 2*t1"));
    }

    #[test]
    fn coprime_gives_one() {
        assert_eq!(gcd(&p("t1^2 - 3*t1 + 1"), &p("t1 - 1")).unwrap(), LaurentPoly::one(1));
        let t1 = LaurentPoly::parse_with_vars("t1 - 1", 2).unwrap();
        assert_eq!(gcd(&p("1 - t2"), &t1).unwrap(), LaurentPoly::one(2));
    }
}
