//! Specialization of `Z[G]`-matrices to `Z[G/H]` through the regular
//! representation.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Sublattice;
use crate::laurent::{LaurentMat, LaurentPoly};
use crate::snf::IntMatrix;

/// The integer matrix of `A ⊗ Z[G/H]`.
///
/// Row `i * k + a` and column `j * k + b` (with `k = [G:H]` and `a`, `b`
/// flat quotient indices) hold the coefficient of the permutation `b -> a`
/// in `A_ij`: the group element `e` acts by `b -> b + [e]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientMatrix {
    pub source: LaurentMat,
    pub lattice: Sublattice,
    pub blocks: IntMatrix<BigInt>,
}

impl QuotientMatrix {
    pub fn index(&self) -> usize {
        self.lattice.index() as usize
    }
}

/// Translation tables of the quotient: `shift(e)[b] = b + [e]`.
struct QuotientGroup<'a> {
    h: &'a Sublattice,
    orders: Vec<u64>,
    elements: Vec<Vec<u64>>,
}

impl<'a> QuotientGroup<'a> {
    fn new(h: &'a Sublattice) -> Self {
        let elements = (0..h.index() as usize).map(|f| h.unflatten(f)).collect();
        Self { h, orders: h.quotient_orders(), elements }
    }

    fn translations(&self, e: &[i64]) -> Vec<usize> {
        let c = self.h.quotient_coords(e);
        self.elements
            .iter()
            .map(|el| {
                let sum: Vec<u64> = el.iter().zip(&c).zip(&self.orders).map(|((x, y), d)| (x + y) % d).collect();
                self.h.flatten(&sum)
            })
            .collect()
    }
}

pub fn specialize_to_quotient(a: &LaurentMat, h: &Sublattice) -> Result<QuotientMatrix> {
    if a.num_vars() != h.rank() {
        return Err(Error::Dimension(format!("{}-variable matrix over a rank {} lattice", a.num_vars(), h.rank())));
    }
    let k = h.index() as usize;
    let group = QuotientGroup::new(h);
    let mut blocks = IntMatrix::zeros(a.rows() * k, a.cols() * k);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            add_block(&mut blocks, &group, a.get(i, j), i * k, j * k);
        }
    }
    Ok(QuotientMatrix { source: a.clone(), lattice: h.clone(), blocks })
}

fn add_block(out: &mut IntMatrix<BigInt>, group: &QuotientGroup<'_>, p: &LaurentPoly, r0: usize, c0: usize) {
    for (e, c) in p.terms() {
        for (b, a) in group.translations(e).into_iter().enumerate() {
            let cur = out.get(r0 + a, c0 + b).clone();
            out.set(r0 + a, c0 + b, cur + c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snf::smith_normal_form;

    fn mat(num_vars: usize, rows: &[&[&str]]) -> LaurentMat {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        LaurentMat::parse_rows(num_vars, &rows).unwrap()
    }

    fn big_rows(m: &IntMatrix<BigInt>) -> Vec<Vec<i64>> {
        m.to_rows().iter().map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect()
    }

    #[test]
    fn circulant_of_t_minus_one() {
        let q = specialize_to_quotient(&mat(1, &[&["t1 - 1"]]), &Sublattice::cyclic(3).unwrap()).unwrap();
        assert_eq!(big_rows(&q.blocks), vec![vec![-1, 0, 1], vec![1, -1, 0], vec![0, 1, -1]]);
        let s = smith_normal_form(&q.blocks, false);
        assert_eq!(s.rank, 2);
        assert!(s.torsion_divisors().is_empty());
    }

    #[test]
    fn scalar_and_group_element() {
        let h = Sublattice::from_generators(vec![vec![1, 1], vec![0, 3]]).unwrap();
        let q = specialize_to_quotient(&mat(2, &[&["2"]]), &h).unwrap();
        assert_eq!(big_rows(&q.blocks), vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]);
        let h = Sublattice::scalar(2, 2).unwrap();
        let q = specialize_to_quotient(&mat(2, &[&["t1"]]), &h).unwrap();
        let rows = big_rows(&q.blocks);
        for r in &rows {
            assert_eq!(r.iter().filter(|&&x| x == 1).count(), 1);
            assert_eq!(r.iter().sum::<i64>(), 1);
        }
        for j in 0..4 {
            assert_eq!(rows.iter().map(|r| r[j]).sum::<i64>(), 1);
        }
    }

    #[test]
    fn dimension_mismatch() {
        assert!(specialize_to_quotient(&mat(1, &[&["t1"]]), &Sublattice::scalar(2, 2).unwrap()).is_err());
    }
}
