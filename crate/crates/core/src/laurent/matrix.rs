//! Dense matrices over the Laurent polynomial ring.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::ring::{bareiss_det, bareiss_rank};
use super::{CharacterPoint, LaurentPoly};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A `rows x cols` matrix over `Z[t1^+-1, ..., tm^+-1]`, stored row-major.
///
/// Zero-sized shapes are allowed; they appear as differentials of complexes
/// with a zero chain group (e.g. the relation matrix of a free group).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentMat {
    rows: usize,
    cols: usize,
    num_vars: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMat {
    pub fn zeros(rows: usize, cols: usize, num_vars: usize) -> Self {
        Self { rows, cols, num_vars, entries: vec![LaurentPoly::zero(num_vars); rows * cols] }
    }

    pub fn identity(n: usize, num_vars: usize) -> Self {
        let mut m = Self::zeros(n, n, num_vars);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one(num_vars));
        }
        m
    }

    /// Builds from rows; every entry must share `num_vars`.
    pub fn from_rows(num_vars: usize, rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension("ragged rows in matrix".into()));
            }
            for e in row {
                if e.num_vars() != num_vars {
                    return Err(Error::Dimension(format!("entry in {} variables inside a {num_vars}-variable matrix", e.num_vars())));
                }
                entries.push(e);
            }
        }
        Ok(Self { rows: r, cols: c, num_vars, entries })
    }

    /// Parses a grid of polynomial strings in a ring with `num_vars` variables.
    pub fn parse_rows<S: AsRef<str>>(num_vars: usize, rows: &[Vec<S>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|s| LaurentPoly::parse_with_vars(s.as_ref(), num_vars)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Self::from_rows(num_vars, parsed)
    }

    /// Integer matrix embedded as constants.
    pub fn from_integers(num_vars: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(num_vars, rows.iter().map(|r| r.iter().map(|&x| LaurentPoly::constant(num_vars, x)).collect()).collect())
    }

    pub fn diagonal(num_vars: usize, diag: Vec<LaurentPoly>) -> Result<Self> {
        let n = diag.len();
        let mut m = Self::zeros(n, n, num_vars);
        for (i, d) in diag.into_iter().enumerate() {
            if d.num_vars() != num_vars {
                return Err(Error::Dimension("diagonal entry has wrong num_vars".into()));
            }
            m.set(i, i, d);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        assert_eq!(p.num_vars(), self.num_vars);
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<LaurentPoly>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows || self.num_vars != other.num_vars {
            return Err(Error::Dimension(format!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Self::zeros(self.rows, other.cols, self.num_vars);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() || self.num_vars != other.num_vars {
            return Err(Error::Dimension("matrix sum of different shapes".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(self.with_entries(entries))
    }

    fn with_entries(&self, entries: Vec<LaurentPoly>) -> Self {
        Self { rows: self.rows, cols: self.cols, num_vars: self.num_vars, entries }
    }

    pub fn scale(&self, p: &LaurentPoly) -> Self {
        let entries = self.entries.iter().map(|e| e * p).collect();
        self.with_entries(entries)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows, self.num_vars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Conjugate transpose: transpose with `t_j -> t_j^-1` entrywise.
    pub fn adjoint(&self) -> Self {
        let mut out = self.transpose();
        for e in &mut out.entries {
            *e = e.bar();
        }
        out
    }

    /// Block diagonal sum `self (+) other`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.num_vars != other.num_vars {
            return Err(Error::Dimension("direct sum across rings".into()));
        }
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols, self.num_vars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len(), self.num_vars);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Exact determinant by fraction-free elimination; the empty matrix has
    /// determinant 1.
    pub fn det(&self) -> Result<LaurentPoly> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        if self.rows == 0 {
            return Ok(LaurentPoly::one(self.num_vars));
        }
        if self.rows == 1 {
            return Ok(self.entries[0].clone());
        }
        Ok(bareiss_det(self.to_rows(), &LaurentPoly::zero(self.num_vars)))
    }

    /// Rank over the fraction field, by exact elimination.
    pub fn exact_rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        bareiss_rank(self.to_rows())
    }

    /// Entrywise image under `t_j -> t^{v_j}` into one variable.
    pub fn specialize_along_vector(&self, v: &[i64]) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.specialize_along_vector(v)).collect::<Result<Vec<_>>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, num_vars: 1, entries })
    }

    /// Complex matrix `A(z)`, row-major.
    pub fn evaluate_at_character<F: Real>(&self, z: &CharacterPoint) -> Vec<Vec<Complex<F>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|e| e.evaluate_at_character(z)).collect()).collect()
    }

    pub fn elementary_row_op(&mut self, target: usize, source: usize, factor: &LaurentPoly) {
        assert_ne!(target, source);
        for j in 0..self.cols {
            let add = self.get(source, j) * factor;
            let idx = target * self.cols + j;
            self.entries[idx] = &self.entries[idx] + &add;
        }
    }

    pub fn elementary_col_op(&mut self, target: usize, source: usize, factor: &LaurentPoly) {
        assert_ne!(target, source);
        for i in 0..self.rows {
            let add = self.get(i, source) * factor;
            let idx = i * self.cols + target;
            self.entries[idx] = &self.entries[idx] + &add;
        }
    }

    pub fn scale_row(&mut self, i: usize, unit: &LaurentPoly) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.entries[idx] = &self.entries[idx] * unit;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Strings of each entry, in the format accepted by `parse_rows`.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|e| e.to_string()).collect()).collect()
    }
}

impl fmt::Debug for LaurentMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentMat[{}x{}; {} vars]{:?}", self.rows, self.cols, self.num_vars, self.to_strings())
    }
}

#[derive(Serialize, Deserialize)]
struct MatJson {
    num_vars: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for LaurentMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatJson { num_vars: self.num_vars, rows: self.rows, cols: self.cols, entries: self.to_strings() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentMat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatJson::deserialize(d)?;
        let mut m = Self::parse_rows(j.num_vars, &j.entries).map_err(serde::de::Error::custom)?;
        if j.entries.is_empty() || j.cols == 0 {
            m = Self::zeros(j.rows, j.cols, j.num_vars);
        }
        if m.shape() != (j.rows, j.cols) {
            return Err(serde::de::Error::custom("matrix shape does not match its entries"));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: usize, rows: &[&[&str]]) -> LaurentMat {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        LaurentMat::parse_rows(n, &rows).unwrap()
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(m(1, &[&["1 - 2*t1"]]).adjoint(), m(1, &[&["1 - 2*t1^-1"]]));
        assert_eq!(LaurentMat::identity(3, 2).adjoint(), LaurentMat::identity(3, 2));
        let a = m(2, &[&["0", "t1"], &["t2", "0"]]);
        assert_eq!(a.adjoint(), m(2, &[&["0", "t2^-1"], &["t1^-1", "0"]]));
    }

    #[test]
    fn adjoint_reverses_products() {
        let a = m(2, &[&["1 + t1", "t2^-1"], &["3", "t1*t2 - 1"]]);
        let b = m(2, &[&["t2", "2"], &["-t1^2", "1"]]);
        let ab = a.multiply(&b).unwrap();
        assert_eq!(ab.adjoint(), b.adjoint().multiply(&a.adjoint()).unwrap());
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn determinant_and_rank() {
        let a = m(1, &[&["1 - 2*t1", "1"], &["0", "1 - 2*t1"]]);
        assert_eq!(a.det().unwrap(), m(1, &[&["1 - 4*t1 + 4*t1^2"]]).get(0, 0).clone());
        let sing = m(2, &[&["1 + t1", "t2 + t1*t2"], &["2", "2*t2"]]);
        assert!(sing.det().unwrap().is_zero());
        assert_eq!(sing.exact_rank(), 1);
        assert_eq!(LaurentMat::zeros(0, 0, 1).det().unwrap(), LaurentPoly::one(1));
    }

    #[test]
    fn json_round_trip() {
        let a = m(2, &[&["1 + t1", "t2^-1"], &["3", "0"]]);
        let s = serde_json::to_string(&a).unwrap();
        let back: LaurentMat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        let empty = LaurentMat::zeros(1, 0, 1);
        let back: LaurentMat = serde_json::from_str(&serde_json::to_string(&empty).unwrap()).unwrap();
        assert_eq!(back, empty);
    }
}
