//! Finitely presented modules over `Z[Z^m]`: elementary ideals and Alexander
//! polynomials, rank over the fraction field, chain complexes of free modules,
//! and presentations coming from a surface gluing.

mod gluing;
mod ideals;
mod rank;

pub use gluing::{gluing_tau, surface_gluing_presentation};
pub use ideals::{alexander_polynomial, first_nonzero_alexander};
pub use rank::{matrix_rank, matrix_rank_seeded, presentation_rank, presentation_rank_seeded, DEFAULT_RANK_SEED};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{LaurentMat, LaurentPoly};

/// The module `Z[G]^g / A Z[G]^r` presented by a `g x r` matrix `A`:
/// generators index rows, relations index columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    matrix: LaurentMat,
}

impl Presentation {
    pub fn new(matrix: LaurentMat) -> Self {
        Self { matrix }
    }

    /// Presentation with a diagonal matrix.
    pub fn diagonal(num_vars: usize, entries: Vec<LaurentPoly>) -> Result<Self> {
        Ok(Self::new(LaurentMat::diagonal(num_vars, entries)?))
    }

    pub fn matrix(&self) -> &LaurentMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> LaurentMat {
        self.matrix
    }

    pub fn generators(&self) -> usize {
        self.matrix.rows()
    }

    pub fn relations(&self) -> usize {
        self.matrix.cols()
    }

    pub fn num_vars(&self) -> usize {
        self.matrix.num_vars()
    }

    /// Equivalent presentation with unit pivots eliminated and zero
    /// relations dropped. Returns the number of zero rows (free generators)
    /// split off and the remaining presentation, which has no zero rows.
    pub fn simplify(&self) -> (usize, Presentation) {
        let mut a = self.matrix.clone();
        loop {
            let mut changed = false;
            // Drop zero columns.
            let keep: Vec<usize> = (0..a.cols()).filter(|&j| (0..a.rows()).any(|i| !a.get(i, j).is_zero())).collect();
            if keep.len() < a.cols() {
                a = a.submatrix(&(0..a.rows()).collect::<Vec<_>>(), &keep);
                changed = true;
            }
            // Eliminate one unit pivot, preferring sparse columns.
            let pivot = (0..a.rows()).flat_map(|i| (0..a.cols()).map(move |j| (i, j))).filter(|&(i, j)| a.get(i, j).is_unit()).min_by_key(
                |&(i, j)| {
                    let col_nnz = (0..a.rows()).filter(|&k| !a.get(k, j).is_zero()).count();
                    let row_nnz = a.row(i).iter().filter(|e| !e.is_zero()).count();
                    (col_nnz - 1) * (row_nnz - 1)
                },
            );
            if let Some((i, j)) = pivot {
                let u = a.get(i, j).clone();
                let inv = LaurentPoly::one(u.num_vars()).div_exact(&u).expect("units are invertible");
                for jj in 0..a.cols() {
                    if jj != j && !a.get(i, jj).is_zero() {
                        let factor = -(a.get(i, jj) * &inv);
                        a.elementary_col_op(jj, j, &factor);
                    }
                }
                let rows: Vec<usize> = (0..a.rows()).filter(|&k| k != i).collect();
                let cols: Vec<usize> = (0..a.cols()).filter(|&k| k != j).collect();
                a = a.submatrix(&rows, &cols);
                changed = true;
            }
            if !changed {
                break;
            }
        }
        let zero_rows: Vec<usize> = (0..a.rows()).filter(|&i| a.row(i).iter().all(|e| e.is_zero())).collect();
        let rest: Vec<usize> = (0..a.rows()).filter(|i| !zero_rows.contains(i)).collect();
        let cols: Vec<usize> = (0..a.cols()).collect();
        (zero_rows.len(), Presentation::new(a.submatrix(&rest, &cols)))
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    gens: usize,
    rels: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vars: Option<usize>,
    matrix: Vec<Vec<String>>,
}

impl Serialize for Presentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PresentationJson { gens: self.generators(), rels: self.relations(), vars: Some(self.num_vars()), matrix: self.matrix.to_strings() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PresentationJson::deserialize(d)?;
        Presentation::from_strings(j.gens, j.rels, j.vars, &j.matrix).map_err(serde::de::Error::custom)
    }
}

impl Presentation {
    /// Builds from polynomial strings; `vars` defaults to the largest
    /// variable index that occurs (at least one).
    pub fn from_strings(gens: usize, rels: usize, vars: Option<usize>, rows: &[Vec<String>]) -> Result<Self> {
        let vars = match vars {
            Some(v) => v,
            None => rows
                .iter()
                .flatten()
                .map(|s| s.parse::<LaurentPoly>().map(|p| p.num_vars()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .max()
                .unwrap_or(1),
        };
        let matrix = if rels == 0 || gens == 0 {
            if rows.iter().any(|r| !r.is_empty()) {
                return Err(Error::Dimension(format!("a {gens}x{rels} presentation has no entries")));
            }
            LaurentMat::zeros(gens, rels, vars)
        } else {
            LaurentMat::parse_rows(vars, rows)?
        };
        if matrix.shape() != (gens, rels) {
            return Err(Error::Dimension(format!(
                "presentation declares {gens}x{rels} but the matrix is {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self::new(matrix))
    }
}

/// A bounded complex `C_k -> ... -> C_1 -> C_0` of free modules, with `d_i`
/// the `n_{i-1} x n_i` matrix of `C_i -> C_{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ChainComplexJson", into = "ChainComplexJson")]
pub struct ChainComplex {
    num_vars: usize,
    ranks: Vec<usize>,
    differentials: Vec<LaurentMat>,
}

#[derive(Serialize, Deserialize)]
struct ChainComplexJson {
    vars: usize,
    differentials: Vec<LaurentMat>,
}

impl TryFrom<ChainComplexJson> for ChainComplex {
    type Error = Error;

    fn try_from(j: ChainComplexJson) -> Result<Self> {
        let c = ChainComplex::new(j.vars, j.differentials)?;
        if !validate_chain_complex(&c) {
            return Err(Error::Invariant("differentials do not compose to zero".into()));
        }
        Ok(c)
    }
}

impl From<ChainComplex> for ChainComplexJson {
    fn from(c: ChainComplex) -> Self {
        Self { vars: c.num_vars, differentials: c.differentials }
    }
}

impl ChainComplex {
    /// Checks shapes only; composition is checked by
    /// [`validate_chain_complex`].
    pub fn new(num_vars: usize, differentials: Vec<LaurentMat>) -> Result<Self> {
        if differentials.is_empty() {
            return Err(Error::Dimension("a complex needs at least one differential".into()));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.num_vars() != num_vars {
                return Err(Error::Dimension(format!("d_{} lives in {} variables", i + 1, d.num_vars())));
            }
        }
        for i in 1..differentials.len() {
            if differentials[i - 1].cols() != differentials[i].rows() {
                return Err(Error::Dimension(format!(
                    "d_{} has {} columns but d_{} has {} rows",
                    i,
                    differentials[i - 1].cols(),
                    i + 1,
                    differentials[i].rows()
                )));
            }
        }
        let mut ranks = vec![differentials[0].rows()];
        ranks.extend(differentials.iter().map(|d| d.cols()));
        Ok(Self { num_vars, ranks, differentials })
    }

    /// `0 -> Z[G] --(p)--> Z[G] -> 0`, a free resolution of `Z[G]/(p)`.
    pub fn resolution(p: &LaurentPoly) -> Self {
        let d = LaurentMat::diagonal(p.num_vars(), vec![p.clone()]).expect("one entry");
        Self::new(p.num_vars(), vec![d]).expect("single differential")
    }

    /// Complex `0 -> Z[G]^r --(A)--> Z[G]^g -> 0` with homology the
    /// presented module in degree 0.
    pub fn from_presentation(p: &Presentation) -> Self {
        Self::new(p.num_vars(), vec![p.matrix().clone()]).expect("single differential")
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// `n_0, ..., n_k`.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Highest degree `k`.
    pub fn top_degree(&self) -> usize {
        self.differentials.len()
    }

    /// `d_i` for `1 <= i <= k`.
    pub fn differential(&self, i: usize) -> Option<&LaurentMat> {
        i.checked_sub(1).and_then(|k| self.differentials.get(k))
    }

    pub fn differentials(&self) -> &[LaurentMat] {
        &self.differentials
    }

    /// Ranks over the fraction field of the differentials, `rk d_i` at
    /// position `i - 1`.
    pub fn differential_ranks(&self) -> Vec<usize> {
        self.differentials.iter().map(matrix_rank).collect()
    }

    /// `rk H_i(C) = n_i - rk d_i - rk d_{i+1}` for `i = 0..=k`.
    pub fn homology_ranks(&self) -> Vec<usize> {
        let r = self.differential_ranks();
        (0..=self.top_degree())
            .map(|i| {
                let into = if i >= 1 { r[i - 1] } else { 0 };
                let out = r.get(i).copied().unwrap_or(0);
                self.ranks[i] - into - out
            })
            .collect()
    }

    pub fn is_l2_acyclic(&self) -> bool {
        self.homology_ranks().iter().all(|&b| b == 0)
    }
}

/// True iff `d_i d_{i+1} = 0` for all consecutive differentials.
pub fn validate_chain_complex(c: &ChainComplex) -> bool {
    c.differentials.windows(2).all(|w| w[0].multiply(&w[1]).map(|p| p.is_zero()).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn validation_examples() {
        let single = ChainComplex::resolution(&poly("t1 - 1"));
        assert!(validate_chain_complex(&single));
        let bad = ChainComplex::new(
            1,
            vec![LaurentMat::diagonal(1, vec![poly("t1 - 1")]).unwrap(), LaurentMat::diagonal(1, vec![poly("t1 + 1")]).unwrap()],
        )
        .unwrap();
        assert!(!validate_chain_complex(&bad));
        let mismatched = ChainComplex::new(1, vec![LaurentMat::zeros(1, 2, 1), LaurentMat::zeros(3, 1, 1)]);
        assert!(matches!(mismatched, Err(Error::Dimension(_))));
    }

    #[test]
    fn presentation_json_round_trip() {
        let p = Presentation::diagonal(1, vec![LaurentPoly::zero(1), poly("t1^2 - 3*t1 + 1")]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: Presentation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let parsed: Presentation = serde_json::from_str(r#"{"gens": 1, "rels": 2, "matrix": [["1 - t1", "t2 - 1"]]}"#).unwrap();
        assert_eq!(parsed.num_vars(), 2);
        let empty: Presentation = serde_json::from_str(r#"{"gens": 1, "rels": 0, "vars": 1, "matrix": [[]]}"#).unwrap();
        assert_eq!(empty.matrix().shape(), (1, 0));
    }

    #[test]
    fn simplify_keeps_module() {
        // [[1, t-1], [0, t^2-3t+1]] collapses to the 1x1 presentation.
        let a = LaurentMat::parse_rows(1, &[vec!["1", "0"], vec!["t1 - 1", "t1^2 - 3*t1 + 1"]]).unwrap();
        let (free, q) = Presentation::new(a).simplify();
        assert_eq!(free, 0);
        assert_eq!(q.matrix().shape(), (1, 1));
        assert!(q.matrix().get(0, 0).associated(&poly("t1^2 - 3*t1 + 1")));
        let (free, q) = Presentation::diagonal(1, vec![LaurentPoly::zero(1), poly("2")]).unwrap().simplify();
        assert_eq!(free, 1);
        assert_eq!(q.matrix().shape(), (1, 1));
    }

    #[test]
    fn homology_ranks_of_resolution() {
        let c = ChainComplex::resolution(&poly("t1 - 1"));
        assert_eq!(c.homology_ranks(), vec![0, 0]);
        assert!(c.is_l2_acyclic());
        let z = ChainComplex::new(1, vec![LaurentMat::zeros(1, 1, 1)]).unwrap();
        assert_eq!(z.homology_ranks(), vec![1, 1]);
    }
}
