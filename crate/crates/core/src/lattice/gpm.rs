//! The subgroups `G_{p,M} = { v : sum_i v_i r_i = 0 mod M }` built from `m`
//! consecutive primes `p = p_1 < ... < p_m` with weights
//! `r_i = prod_{j != i} p_j`.

use serde::{Deserialize, Serialize};

use super::Sublattice;
use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The `m` consecutive primes starting at the prime `p`.
pub fn next_primes(p: u64, m: usize) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(Error::Domain("need at least one prime".into()));
    }
    let mut out = vec![p];
    let mut q = p;
    while out.len() < m {
        q += 1;
        if is_prime(q) {
            out.push(q);
        }
    }
    Ok(out)
}

/// Parameters and derived data of `G_{p,M}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpmSpec {
    pub m: usize,
    pub p: u64,
    #[serde(rename = "M")]
    pub modulus: u64,
    pub primes: Vec<u64>,
    pub weights: Vec<i64>,
    /// A vector with `<r, v> = 1`.
    pub v: Vec<i64>,
}

impl GpmSpec {
    /// Weights and a coefficient vector for `G_{p,M}`, without the lattice.
    pub fn new(m: usize, p: u64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Domain("modulus M must be positive".into()));
        }
        let primes = next_primes(p, m)?;
        let weights: Vec<i64> = (0..m)
            .map(|i| primes.iter().enumerate().filter(|&(j, _)| j != i).try_fold(1i64, |acc, (_, &q)| acc.checked_mul(q as i64)))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Domain("prime weights overflow i64".into()))?;
        let (v, _) = unimodular_completion(&weights);
        Ok(Self { m, p, modulus, primes, weights, v })
    }

    /// `m * p_1 * ... * p_m`; moduli above it guarantee `alpha >= p`.
    pub fn alpha_threshold(&self) -> u128 {
        self.primes.iter().fold(self.m as u128, |acc, &q| acc * q as u128)
    }

    pub fn alpha_guaranteed(&self) -> bool {
        self.modulus as u128 > self.alpha_threshold()
    }
}

/// Column operations reducing the primitive row `r` to `(1, 0, ..., 0)`:
/// returns `v` with `<r, v> = 1` and a basis of `r^perp`, together forming
/// a unimodular matrix. Iterated Euclid on the entries.
fn unimodular_completion(r: &[i64]) -> (Vec<i64>, Vec<Vec<i64>>) {
    let m = r.len();
    let mut a: Vec<i64> = r.to_vec();
    // w[k] is the k-th column of the accumulated transform.
    let mut w: Vec<Vec<i64>> = (0..m).map(|k| (0..m).map(|j| i64::from(j == k)).collect()).collect();
    loop {
        let nonzero: Vec<usize> = (0..m).filter(|&k| a[k] != 0).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let k = *nonzero.iter().min_by_key(|&&k| a[k].abs()).unwrap();
        for &j in &nonzero {
            if j != k {
                let q = a[j].div_euclid(a[k]);
                a[j] -= q * a[k];
                let wk = w[k].clone();
                for (x, y) in w[j].iter_mut().zip(&wk) {
                    *x -= q * y;
                }
            }
        }
    }
    let k = (0..m).find(|&k| a[k] != 0).expect("weights are not all zero");
    assert_eq!(a[k].abs(), 1, "weights must be coprime");
    let mut v = w[k].clone();
    if a[k] < 0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let perp = (0..m).filter(|&j| j != k).map(|j| w[j].clone()).collect();
    (v, perp)
}

/// `G_{p,M}` as generator rows `M v` together with a basis of `r^perp`.
pub fn construct_gpm(m: usize, p: u64, modulus: u64) -> Result<(Sublattice, GpmSpec)> {
    let spec = GpmSpec::new(m, p, modulus)?;
    let (v, perp) = unimodular_completion(&spec.weights);
    let mm = i64::try_from(modulus).map_err(|_| Error::Domain("modulus exceeds i64".into()))?;
    let mut rows = vec![v.iter().map(|x| x * mm).collect::<Vec<_>>()];
    rows.extend(perp);
    Ok((Sublattice::from_generators(rows)?, spec))
}
