//! Finite-index subgroups `H` of `Z^m`, the finite quotient `Z^m / H`, and its
//! character group `H^perp` of torsion points on the torus.

mod gpm;

pub use gpm::{construct_gpm, is_prime, next_primes, GpmSpec};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::CharacterPoint;
use crate::snf::{smith_normal_form, IntMatrix};

/// Largest ambient rank accepted by [`Sublattice::alpha_min_norm`].
pub const MAX_ALPHA_RANK: usize = 4;

/// A full-rank subgroup `H` of `Z^m` given by generator rows.
///
/// The Smith decomposition `U A V = diag(d)` of the generator matrix `A` is
/// computed once: `x` lies in `H` iff `(x V)_i = 0 mod d_i`, and these residues
/// are the quotient coordinates of `x` in `Z^m / H = (+)_i Z/d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    rows: Vec<Vec<i64>>,
    index: u64,
    divisors: Vec<u64>,
    /// Positions `i` with `d_i > 1`.
    slots: Vec<usize>,
    /// `basis[j][s] = V[j][slots[s]] mod d_{slots[s]}`.
    basis: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct SublatticeJson {
    rank: usize,
    rows: Vec<Vec<i64>>,
}

impl Serialize for Sublattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SublatticeJson { rank: self.rank(), rows: self.rows.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Sublattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SublatticeJson::deserialize(d)?;
        if j.rows.len() != j.rank {
            return Err(serde::de::Error::custom("rank does not match the number of rows"));
        }
        Sublattice::from_generators(j.rows).map_err(serde::de::Error::custom)
    }
}

impl Sublattice {
    /// The subgroup generated by the rows of a square integer matrix.
    pub fn from_generators(rows: Vec<Vec<i64>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 || rows.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("generator matrix must be square and nonempty".into()));
        }
        let a = IntMatrix::<BigInt>::from_i64_rows(&rows)?;
        let snf = smith_normal_form(&a, true);
        if snf.rank < m {
            return Err(Error::InfiniteIndex);
        }
        let divisors: Vec<u64> = snf
            .divisors
            .iter()
            .map(|d| d.to_u64().ok_or_else(|| Error::Domain("subgroup index exceeds u64".into())))
            .collect::<Result<_>>()?;
        let index = divisors
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::Domain("subgroup index exceeds u64".into()))?;
        let (_, v) = snf.transforms.expect("transforms were requested");
        let slots: Vec<usize> = (0..m).filter(|&i| divisors[i] > 1).collect();
        let basis = (0..m)
            .map(|j| {
                slots
                    .iter()
                    .map(|&s| {
                        let d = BigInt::from(divisors[s]);
                        v.get(j, s).mod_floor(&d).to_u64().unwrap()
                    })
                    .collect()
            })
            .collect();
        Ok(Self { rows, index, divisors, slots, basis })
    }

    /// `N Z^m`; for `m = 1` this is the subgroup of the cyclic `N`-fold cover.
    pub fn scalar(m: usize, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InfiniteIndex);
        }
        let n = i64::try_from(n).map_err(|_| Error::Domain("modulus exceeds i64".into()))?;
        Self::from_generators((0..m).map(|i| (0..m).map(|j| if i == j { n } else { 0 }).collect()).collect())
    }

    /// `N Z` inside `Z`.
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::scalar(1, n)
    }

    /// The diagonal lattice `(+)_i d_i Z`.
    pub fn diagonal(d: &[i64]) -> Result<Self> {
        let m = d.len();
        Self::from_generators((0..m).map(|i| (0..m).map(|j| if i == j { d[i] } else { 0 }).collect()).collect())
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// `[Z^m : H]`.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Elementary divisors `d_1 | ... | d_m` of the generator matrix.
    pub fn elementary_divisors(&self) -> &[u64] {
        &self.divisors
    }

    /// Orders of the cyclic factors of `Z^m / H` that are nontrivial.
    pub fn quotient_orders(&self) -> Vec<u64> {
        self.slots.iter().map(|&s| self.divisors[s]).collect()
    }

    /// True when `Z^m / H` is cyclic.
    pub fn is_cyclic(&self) -> bool {
        self.slots.len() <= 1
    }

    /// Coordinates of the class of `x` in `(+) Z/d_i` over the nontrivial
    /// factors.
    pub fn quotient_coords(&self, x: &[i64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rank(), "vector length must equal the ambient rank");
        self.slots
            .iter()
            .enumerate()
            .map(|(s, &slot)| {
                let d = self.divisors[slot] as i128;
                let acc: i128 = x.iter().zip(&self.basis).map(|(&xj, row)| xj as i128 * row[s] as i128).sum();
                acc.rem_euclid(d) as u64
            })
            .collect()
    }

    /// Position of the class of `x` in the lexicographic enumeration of the
    /// quotient (first nontrivial factor most significant).
    pub fn quotient_index(&self, x: &[i64]) -> usize {
        self.flatten(&self.quotient_coords(x))
    }

    pub fn flatten(&self, coords: &[u64]) -> usize {
        coords.iter().zip(self.quotient_orders()).fold(0usize, |acc, (&c, d)| acc * d as usize + c as usize)
    }

    pub fn unflatten(&self, mut flat: usize) -> Vec<u64> {
        let orders = self.quotient_orders();
        let mut out = vec![0; orders.len()];
        for s in (0..orders.len()).rev() {
            out[s] = (flat % orders[s] as usize) as u64;
            flat /= orders[s] as usize;
        }
        out
    }

    /// Index of `a + b` in the quotient, for flat indices `a`, `b`.
    pub fn add_flat(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.unflatten(a), self.unflatten(b));
        let orders = self.quotient_orders();
        let sum: Vec<u64> = ca.iter().zip(&cb).zip(&orders).map(|((x, y), d)| (x + y) % d).collect();
        self.flatten(&sum)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.quotient_coords(x).iter().all(|&c| c == 0)
    }

    /// The character `x -> exp(2 pi i sum_s k_s (x V)_s / d_s)`.
    pub fn character(&self, k: &[u64]) -> CharacterPoint {
        let m = self.rank();
        let orders = self.quotient_orders();
        let lcm = orders.iter().fold(1u64, |l, &d| l.lcm(&d));
        let nums: Vec<i64> = (0..m)
            .map(|j| {
                let acc: i128 = (0..orders.len()).map(|s| k[s] as i128 * self.basis[j][s] as i128 * (lcm / orders[s]) as i128).sum();
                acc.rem_euclid(lcm as i128) as i64
            })
            .collect();
        CharacterPoint::new(&nums, lcm).expect("positive denominator")
    }

    /// All `[G:H]` characters of `Z^m / H`, in lexicographic order of `k`.
    pub fn dual_characters(&self) -> Vec<CharacterPoint> {
        (0..self.index as usize).map(|f| self.character(&self.unflatten(f))).collect()
    }

    /// `alpha(H) = min { max_i |v_i| : 0 != v in H }`, by exhaustive search
    /// over sup-norm shells. The search radius is capped by the shortest
    /// generator and by Minkowski's bound `r^m >= [G:H]` for the cube.
    pub fn alpha_min_norm(&self) -> Result<u64> {
        let m = self.rank();
        if m > MAX_ALPHA_RANK {
            return Err(Error::UnsupportedRank { rank: m, max: MAX_ALPHA_RANK });
        }
        let gen_bound = self.rows.iter().map(|r| r.iter().map(|x| x.unsigned_abs()).max().unwrap()).min().unwrap();
        let mut mink = 1u64;
        while (mink as u128).pow(m as u32) < self.index as u128 {
            mink += 1;
        }
        let bound = gen_bound.min(mink);
        for r in 1..=bound {
            if self.shell_has_point(r as i64) {
                return Ok(r);
            }
        }
        Ok(bound)
    }

    /// Whether some `v` in `H` has `max |v_i| = r`, enumerating one vector of
    /// each sign pair.
    fn shell_has_point(&self, r: i64) -> bool {
        let m = self.rank();
        let mut x = vec![-r; m];
        loop {
            let on_shell = x.iter().any(|c| c.abs() == r);
            let leading_positive = x.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0);
            if on_shell && leading_positive && self.contains(&x) {
                return true;
            }
            let mut j = m;
            loop {
                if j == 0 {
                    return false;
                }
                j -= 1;
                if x[j] < r {
                    x[j] += 1;
                    break;
                }
                x[j] = -r;
            }
        }
    }
}

/// Brute-force `alpha(H)` over the box `|v_i| <= bound`; used as an oracle.
pub fn alpha_by_box_search(h: &Sublattice, bound: i64) -> Option<u64> {
    let m = h.rank();
    let mut best: Option<u64> = None;
    let total = (2 * bound + 1).pow(m as u32);
    for code in 0..total {
        let mut c = code;
        let x: Vec<i64> = (0..m)
            .map(|_| {
                let d = c % (2 * bound + 1);
                c /= 2 * bound + 1;
                d - bound
            })
            .collect();
        if x.iter().all(|&v| v == 0) || !h.contains(&x) {
            continue;
        }
        let n = x.iter().map(|v| v.unsigned_abs()).max().unwrap();
        best = Some(best.map_or(n, |b| b.min(n)));
    }
    best
}

impl std::fmt::Display for Sublattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| format!("{r:?}")).collect();
        write!(f, "H[{}]", rows.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn index_and_divisors() {
        let h = Sublattice::cyclic(7).unwrap();
        assert_eq!(h.index(), 7);
        assert_eq!(h.elementary_divisors(), &[7]);
        let h = Sublattice::diagonal(&[2, 3]).unwrap();
        assert_eq!(h.index(), 6);
        assert_eq!(h.elementary_divisors(), &[1, 6]);
        assert!(h.is_cyclic());
        let h = Sublattice::from_generators(vec![vec![1, 1], vec![0, 2]]).unwrap();
        assert_eq!(h.index(), 2);
        assert_eq!(Sublattice::from_generators(vec![vec![1, 2], vec![2, 4]]), Err(Error::InfiniteIndex));
    }

    #[test]
    fn cyclic_characters_are_roots_of_unity() {
        let h = Sublattice::cyclic(5).unwrap();
        let chars = h.dual_characters();
        let expect: Vec<CharacterPoint> = (0..5).map(|k| CharacterPoint::new(&[k], 5).unwrap()).collect();
        assert_eq!(chars, expect);
    }

    #[test]
    fn two_torsion_characters() {
        let h = Sublattice::scalar(2, 2).unwrap();
        let set: BTreeSet<Vec<u64>> =
            h.dual_characters().iter().map(|z| z.angles().iter().map(|a| if *a.numer() == 0 { 0 } else { 1 }).collect()).collect();
        assert_eq!(set.len(), 4);
        for z in h.dual_characters() {
            assert!(z.order() <= 2);
        }
    }

    #[test]
    fn characters_are_integral_on_generators() {
        let h = Sublattice::from_generators(vec![vec![3, 1, 0], vec![0, 4, 2], vec![1, 0, 5]]).unwrap();
        let chars = h.dual_characters();
        assert_eq!(chars.len() as u64, h.index());
        let distinct: BTreeSet<_> = chars.iter().collect();
        assert_eq!(distinct.len(), chars.len());
        for z in &chars {
            for row in h.generators() {
                assert_eq!(z.phase_of(row), 0);
            }
        }
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(Sublattice::cyclic(9).unwrap().alpha_min_norm().unwrap(), 9);
        assert_eq!(Sublattice::diagonal(&[5, 7]).unwrap().alpha_min_norm().unwrap(), 5);
        let five = Sublattice::from_generators(vec![
            vec![1; 5],
            vec![0, 1, 0, 0, 0],
            vec![0, 0, 1, 0, 0],
            vec![0, 0, 0, 1, 0],
            vec![0, 0, 0, 0, 1],
        ])
        .unwrap();
        assert!(matches!(five.alpha_min_norm(), Err(Error::UnsupportedRank { rank: 5, .. })));
    }

    #[test]
    fn alpha_matches_box_oracle_for_congruence_lattice() {
        // {v : 7 v1 + 5 v2 = 0 mod 71} is spanned by (71, 0) and (50, 1).
        let h = Sublattice::from_generators(vec![vec![71, 0], vec![50, 1]]).unwrap();
        assert_eq!(h.index(), 71);
        for v in [[71, 0], [-5, 7], [5, -7], [10, -14]] {
            assert!(h.contains(&v));
        }
        assert_eq!(h.alpha_min_norm().unwrap(), alpha_by_box_search(&h, 71).unwrap());
    }

    #[test]
    fn json_form() {
        let h = Sublattice::from_generators(vec![vec![2, 1], vec![0, 3]]).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"rank":2,"rows":[[2,1],[0,3]]}"#);
        let back: Sublattice = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
    }
}
