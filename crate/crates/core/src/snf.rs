//! Smith normal form of integer matrices.
//!
//! Elimination picks the nonzero entry of least absolute value as pivot and
//! reduces its row and column by floor division until both are clear; a final
//! pass on the diagonal enforces `d_i | d_{i+1}` with gcd/lcm exchanges. All
//! operations are unimodular, so the transforms `U`, `V` with `U B V = D` can
//! be recorded on request.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::ring::{bareiss_det, bareiss_rank};
use crate::scalar::ExactInt;

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: ExactInt> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    /// Builds from rows of equal length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows in integer matrix".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| T::of_i64(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: T) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Self::zeros(self.rows, other.cols);
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
                        out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn map<S: ExactInt>(&self, f: impl Fn(&T) -> S) -> IntMatrix<S> {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Rank over the rationals by fraction-free elimination.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let big: Vec<Vec<BigInt>> = (0..self.rows).map(|i| self.row(i).iter().map(to_big).collect()).collect();
        bareiss_rank(big)
    }
}

fn to_big<T: ExactInt>(x: &T) -> BigInt {
    x.to_bigint()
}

/// Result of a Smith normal form computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<T> {
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_rank`, all positive.
    pub divisors: Vec<T>,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    /// `U` (rows x rows) and `V` (cols x cols), unimodular, with `U B V = D`.
    pub transforms: Option<(IntMatrix<T>, IntMatrix<T>)>,
}

impl<T: ExactInt> SmithForm<T> {
    /// Divisors greater than one: the invariant factors of the torsion part
    /// of the cokernel.
    pub fn torsion_divisors(&self) -> Vec<T> {
        self.divisors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    /// Order of the torsion of the cokernel.
    pub fn torsion_order(&self) -> T {
        self.divisors.iter().fold(T::one(), |acc, d| acc * d.clone())
    }

    /// Free rank of the cokernel `Z^rows / B Z^cols`.
    pub fn cokernel_free_rank(&self) -> usize {
        self.rows - self.rank
    }

    /// The diagonal matrix `D`.
    pub fn diagonal(&self) -> IntMatrix<T> {
        let mut d = IntMatrix::zeros(self.rows, self.cols);
        for (i, x) in self.divisors.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }

    /// Checks `U B V = D` and that `U`, `V` are invertible over the integers.
    pub fn verify(&self, b: &IntMatrix<T>) -> bool {
        let Some((u, v)) = &self.transforms else {
            return false;
        };
        let lhs = u.multiply(b).and_then(|ub| ub.multiply(v));
        let unimodular = |m: &IntMatrix<T>| {
            let rows: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| m.row(i).iter().map(to_big).collect()).collect();
            let d = bareiss_det(rows, &BigInt::zero());
            d == BigInt::one() || d == -BigInt::one()
        };
        matches!(lhs, Ok(ref m) if *m == self.diagonal()) && (u.rows == 0 || unimodular(u)) && (v.rows == 0 || unimodular(v))
    }
}

/// Invariant factors `d_1 | d_2 | ...` (all greater than one) of the
/// finite abelian group `(+) Z/a_i`, by pairwise gcd/lcm exchanges. Entries
/// equal to zero are rejected by the caller; ones are dropped.
pub fn invariant_factors<T: ExactInt>(orders: &[T]) -> Vec<T> {
    let mut a: Vec<T> = orders.iter().map(|x| x.abs()).filter(|x| !x.is_one()).collect();
    a.sort();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if (a[j].clone() % a[i].clone()).is_zero() {
                continue;
            }
            let g = a[i].gcd(&a[j]);
            let l = a[i].clone() / g.clone() * a[j].clone();
            a[i] = g;
            a[j] = l;
        }
    }
    a.retain(|x| !x.is_one());
    a
}

/// Smith normal form; `with_transforms` also records `U` and `V`.
pub fn smith_normal_form<T: ExactInt>(b: &IntMatrix<T>, with_transforms: bool) -> SmithForm<T> {
    let mut e = Eliminator::new(b, with_transforms);
    e.diagonalize();
    e.fix_divisibility();
    e.finish()
}

struct Eliminator<T> {
    a: Vec<Vec<T>>,
    rows: usize,
    cols: usize,
    u: Option<Vec<Vec<T>>>,
    v: Option<Vec<Vec<T>>>,
    rank: usize,
}

impl<T: ExactInt> Eliminator<T> {
    fn new(b: &IntMatrix<T>, with_transforms: bool) -> Self {
        let eye =
            |n: usize| -> Vec<Vec<T>> { (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect() };
        Self {
            a: b.to_rows(),
            rows: b.rows,
            cols: b.cols,
            u: with_transforms.then(|| eye(b.rows)),
            v: with_transforms.then(|| eye(b.cols)),
            rank: 0,
        }
    }

    /// `row[i] -= q * row[k]`.
    fn row_sub(&mut self, i: usize, k: usize, q: &T) {
        let (ri, rk) = pair_mut(&mut self.a, i, k);
        axpy(ri, rk, q);
        if let Some(u) = &mut self.u {
            let (ui, uk) = pair_mut(u, i, k);
            axpy(ui, uk, q);
        }
    }

    /// `col[j] -= q * col[k]`.
    fn col_sub(&mut self, j: usize, k: usize, q: &T) {
        for row in &mut self.a {
            if !row[k].is_zero() {
                row[j] = row[j].clone() - q.clone() * row[k].clone();
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !row[k].is_zero() {
                    row[j] = row[j].clone() - q.clone() * row[k].clone();
                }
            }
        }
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i != k {
            self.a.swap(i, k);
            if let Some(u) = &mut self.u {
                u.swap(i, k);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j != k {
            for row in &mut self.a {
                row.swap(j, k);
            }
            if let Some(v) = &mut self.v {
                for row in v.iter_mut() {
                    row.swap(j, k);
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -x.clone();
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -x.clone();
            }
        }
    }

    /// Moves a nonzero entry of least absolute value in column `t` (rows
    /// `>= t`) to `(t, t)`, bringing in another column if column `t` is clear.
    fn place_pivot(&mut self, t: usize) -> bool {
        let best_in_col = |a: &Vec<Vec<T>>, j: usize| -> Option<usize> {
            (t..a.len()).filter(|&i| !a[i][j].is_zero()).min_by(|&x, &y| a[x][j].abs().cmp(&a[y][j].abs()))
        };
        let mut found = best_in_col(&self.a, t).map(|i| (i, t));
        if found.is_none() {
            found = (t + 1..self.cols).find_map(|j| best_in_col(&self.a, j).map(|i| (i, j)));
        }
        match found {
            Some((i, j)) => {
                self.swap_cols(t, j);
                self.swap_rows(t, i);
                true
            }
            None => false,
        }
    }

    fn diagonalize(&mut self) {
        let limit = self.rows.min(self.cols);
        let mut t = 0;
        while t < limit {
            if !self.place_pivot(t) {
                break;
            }
            loop {
                // Clear column t below the pivot.
                let mut dirty = false;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].div_floor(&self.a[t][t]);
                    self.row_sub(i, t, &q);
                    dirty |= !self.a[i][t].is_zero();
                }
                if dirty {
                    self.place_pivot(t);
                    continue;
                }
                // Clear row t right of the pivot.
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].div_floor(&self.a[t][t]);
                    self.col_sub(j, t, &q);
                    dirty |= !self.a[t][j].is_zero();
                }
                if !dirty {
                    break;
                }
                let j = (t + 1..self.cols)
                    .filter(|&j| !self.a[t][j].is_zero())
                    .min_by(|&x, &y| self.a[t][x].abs().cmp(&self.a[t][y].abs()))
                    .unwrap();
                self.swap_cols(t, j);
            }
            t += 1;
        }
        self.rank = t;
    }

    /// Zeroes `a[i][j]` with column operations between columns `i` and `j`,
    /// leaving their gcd at `a[i][i]`.
    /// The off-diagonal entry is reduced by the pivot first, so a swap only
    /// happens when `|a[i][i]|` strictly drops.
    fn col_euclid(&mut self, i: usize, j: usize) {
        while !self.a[i][j].is_zero() {
            if !self.a[i][i].is_zero() {
                let q = self.a[i][j].div_floor(&self.a[i][i]);
                self.col_sub(j, i, &q);
            }
            if !self.a[i][j].is_zero() {
                self.swap_cols(i, j);
            }
        }
    }

    fn row_euclid(&mut self, i: usize, j: usize) {
        while !self.a[j][i].is_zero() {
            if !self.a[i][i].is_zero() {
                let q = self.a[j][i].div_floor(&self.a[i][i]);
                self.row_sub(j, i, &q);
            }
            if !self.a[j][i].is_zero() {
                self.swap_rows(i, j);
            }
        }
    }

    /// Replaces diagonal pairs `(a, b)` with `a` not dividing `b` by
    /// `(gcd, lcm)` until the divisibility chain holds.
    fn fix_divisibility(&mut self) {
        let r = self.rank;
        for i in 0..r {
            for j in i + 1..r {
                if self.a[j][j].is_multiple_of(&self.a[i][i]) {
                    continue;
                }
                // [[a, 0], [0, b]] -> [[a, b], [0, b]] -> diagonal (g, ab/g).
                let one = T::one();
                self.row_sub(i, j, &-one);
                while !self.a[i][j].is_zero() || !self.a[j][i].is_zero() {
                    self.col_euclid(i, j);
                    self.row_euclid(i, j);
                }
            }
        }
        for i in 0..r {
            if self.a[i][i].is_negative() {
                self.negate_row(i);
            }
        }
    }

    fn finish(self) -> SmithForm<T> {
        let divisors = (0..self.rank).map(|i| self.a[i][i].clone()).collect();
        let transforms = match (self.u, self.v) {
            (Some(u), Some(v)) => Some((square_from_rows(u), square_from_rows(v))),
            _ => None,
        };
        SmithForm { divisors, rank: self.rank, rows: self.rows, cols: self.cols, transforms }
    }
}

fn square_from_rows<T: ExactInt>(rows: Vec<Vec<T>>) -> IntMatrix<T> {
    let n = rows.len();
    IntMatrix { rows: n, cols: n, data: rows.into_iter().flatten().collect() }
}

fn pair_mut<R>(v: &mut [R], i: usize, k: usize) -> (&mut R, &R) {
    assert_ne!(i, k);
    if i < k {
        let (lo, hi) = v.split_at_mut(k);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(i);
        (&mut hi[0], &lo[k])
    }
}

fn axpy<T: ExactInt>(dst: &mut [T], src: &[T], q: &T) {
    if q.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = d.clone() - q.clone() * s.clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix<BigInt> {
        IntMatrix::from_i64_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn divs(f: &SmithForm<BigInt>) -> Vec<i64> {
        f.divisors.iter().map(|d| d.try_into().unwrap()).collect()
    }

    #[test]
    fn diagonal_is_forced() {
        let f = smith_normal_form(&mat(&[&[2, 0], &[0, 3]]), true);
        assert_eq!(divs(&f), vec![1, 6]);
        assert!(f.verify(&mat(&[&[2, 0], &[0, 3]])));
    }

    #[test]
    fn divisibility_fix_with_unit_pivot_terminates() {
        let a = mat(&[&[20, 6, 4, 6, 8], &[4, -2, 16, -5, 0], &[3, 20, -17, 4, 6], &[18, 9, -17, -19, -1], &[4, 14, 18, -15, 0]]);
        let f = smith_normal_form(&a, true);
        assert_eq!(divs(&f), vec![1, 1, 1, 2, 110826]);
        assert!(f.verify(&a));
    }

    #[test]
    fn zero_matrix() {
        let z = IntMatrix::<BigInt>::zeros(3, 2);
        let f = smith_normal_form(&z, true);
        assert_eq!(f.rank, 0);
        assert!(f.divisors.is_empty());
        assert!(f.verify(&z));
    }

    #[test]
    fn circulant_of_augmentation() {
        let c = mat(&[&[-1, 0, 1], &[1, -1, 0], &[0, 1, -1]]);
        let f = smith_normal_form(&c, true);
        assert_eq!(divs(&f), vec![1, 1]);
        assert_eq!(f.rank, 2);
        assert!(f.torsion_divisors().is_empty());
        assert!(f.verify(&c));
    }

    #[test]
    fn chain_with_mixed_factors() {
        let b = mat(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]);
        let f = smith_normal_form(&b, true);
        assert_eq!(divs(&f), vec![2, 2, 60]);
        assert!(f.verify(&b));
    }

    #[test]
    fn machine_integers_agree_with_bigint() {
        let rows = vec![vec![3i64, -7, 12, 5], vec![0, 14, 4, -2], vec![9, 1, -6, 8]];
        let small = smith_normal_form(&IntMatrix::<i64>::from_i64_rows(&rows).unwrap(), true);
        let big = smith_normal_form(&IntMatrix::<BigInt>::from_i64_rows(&rows).unwrap(), false);
        assert_eq!(small.divisors.iter().map(|&d| BigInt::from(d)).collect::<Vec<_>>(), big.divisors);
        assert!(small.verify(&IntMatrix::<i64>::from_i64_rows(&rows).unwrap()));
    }

    #[test]
    fn rectangular_and_empty_shapes() {
        let b = mat(&[&[2, 4, 6]]);
        let f = smith_normal_form(&b, true);
        assert_eq!(divs(&f), vec![2]);
        assert!(f.verify(&b));
        let e = IntMatrix::<BigInt>::zeros(0, 4);
        assert_eq!(smith_normal_form(&e, true).rank, 0);
        let e = IntMatrix::<BigInt>::zeros(2, 0);
        let f = smith_normal_form(&e, true);
        assert_eq!(f.cokernel_free_rank(), 2);
    }

    #[test]
    fn invariant_factors_of_direct_sum() {
        assert_eq!(invariant_factors(&[2i64, 3]), vec![6]);
        assert_eq!(invariant_factors(&[4i64, 6, 1]), vec![2, 12]);
        assert_eq!(invariant_factors(&[2i64, 2, 2]), vec![2, 2, 2]);
        assert!(invariant_factors::<i64>(&[1, -1]).is_empty());
    }
}
