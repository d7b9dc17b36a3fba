//! Elementary ideals and Alexander polynomials.

use super::{presentation_rank, Presentation};
use crate::laurent::{gcd, LaurentMat, LaurentPoly};

/// `Delta_l`: gcd of the `(g - l)`-minors of the presentation matrix, in
/// canonical unit form.
///
/// The empty minor is 1, so `Delta_l = 1` once `l >= g`; when `g - l`
/// exceeds the number of relations there are no minors and the ideal is 0.
/// Enumeration stops as soon as the running gcd is a unit.
pub fn alexander_polynomial(p: &Presentation, l: usize) -> LaurentPoly {
    let n = p.num_vars();
    let g = p.generators();
    if l >= g {
        return LaurentPoly::one(n);
    }
    let k = g - l;
    let a = p.matrix();
    if k > a.cols() {
        return LaurentPoly::zero(n);
    }
    let mut acc = LaurentPoly::zero(n);
    let col_sets = subsets(a.cols(), k);
    for rows in subsets(g, k) {
        for cols in &col_sets {
            let minor = minor_det(a, &rows, cols);
            if minor.is_zero() {
                continue;
            }
            acc = gcd(&acc, &minor).expect("entries share num_vars");
            if acc.is_unit() {
                return acc;
            }
        }
    }
    acc
}

fn minor_det(a: &LaurentMat, rows: &[usize], cols: &[usize]) -> LaurentPoly {
    a.submatrix(rows, cols).det().expect("square minor")
}

/// The least `j` with `Delta_j != 0`, and that polynomial.
///
/// `Delta_j` vanishes for `j` below the module rank, so the scan starts at
/// [`presentation_rank`].
pub fn first_nonzero_alexander(p: &Presentation) -> (usize, LaurentPoly) {
    let start = presentation_rank(p);
    for j in start..=p.generators() {
        let d = alexander_polynomial(p, j);
        if !d.is_zero() {
            return (j, d);
        }
    }
    (p.generators(), LaurentPoly::one(p.num_vars()))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn one_by_one() {
        let d = poly("t1^2 - 3*t1 + 1");
        let p = Presentation::diagonal(1, vec![d.clone()]).unwrap();
        assert_eq!(alexander_polynomial(&p, 0), d.canonical_unit_normal_form());
        assert_eq!(first_nonzero_alexander(&p), (0, d.canonical_unit_normal_form()));
    }

    #[test]
    fn diagonal_pairs() {
        let f = poly("t1 - 1");
        let g = poly("t1^2 - 1");
        let p = Presentation::diagonal(1, vec![f.clone(), g.clone()]).unwrap();
        assert_eq!(alexander_polynomial(&p, 0), (&f * &g).canonical_unit_normal_form());
        assert_eq!(alexander_polynomial(&p, 1), f.canonical_unit_normal_form());
        assert_eq!(alexander_polynomial(&p, 2), LaurentPoly::one(1));
    }

    #[test]
    fn null_first_polynomial() {
        let d = poly("t1^2 - 3*t1 + 1");
        let p = Presentation::diagonal(1, vec![LaurentPoly::zero(1), d.clone()]).unwrap();
        assert!(alexander_polynomial(&p, 0).is_zero());
        assert_eq!(alexander_polynomial(&p, 1), d.canonical_unit_normal_form());
        assert_eq!(first_nonzero_alexander(&p), (1, d.canonical_unit_normal_form()));
    }

    #[test]
    fn free_module() {
        let p = Presentation::new(LaurentMat::zeros(2, 2, 1));
        assert_eq!(first_nonzero_alexander(&p), (2, LaurentPoly::one(1)));
        let circle = Presentation::new(LaurentMat::zeros(1, 0, 1));
        assert!(alexander_polynomial(&circle, 0).is_zero());
        assert_eq!(alexander_polynomial(&circle, 1), LaurentPoly::one(1));
    }
}
