//! Finite abelian covers: specialization of complexes to `Z[G/H]`, exact
//! homology through Smith normal forms, `det'` through characters, and
//! torsion growth along sequences of sublattices.

mod cyclic;
mod det;
mod growth;
mod quotient;

pub use crate::snf::{invariant_factors, smith_normal_form, IntMatrix, SmithForm};
pub use cyclic::{cyclic_module_homology, CyclicQuotient};
pub use det::{det_prime_dense, det_prime_via_characters};
pub use growth::{
    betti_deviation_report, torsion_growth_sequence, BettiDeviation, BettiDeviationReport, GrowthSequence, GrowthStep, Schedule, CSV_HEADER,
};
pub use quotient::{specialize_to_quotient, QuotientMatrix};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::alexmod::{ChainComplex, Presentation};
use crate::error::{Error, Result};
use crate::lattice::Sublattice;
use crate::laurent::{LaurentMat, LaurentPoly};
use crate::scalar::big_ln_abs;

/// `H_i` of the cover `C ⊗ Z[G/H]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverHomologyReport {
    pub degree: usize,
    pub index: u64,
    pub betti: u64,
    /// Invariant factors greater than one.
    #[serde(with = "big_list")]
    pub divisors: Vec<BigInt>,
    #[serde(with = "big_one")]
    pub torsion_order: BigInt,
    pub log_torsion: f64,
    /// `log|torsion| / [G:H]`.
    pub log_torsion_normalized: f64,
}

impl CoverHomologyReport {
    pub fn new(degree: usize, index: u64, betti: u64, divisors: Vec<BigInt>) -> Self {
        let torsion_order: BigInt = divisors.iter().fold(BigInt::one(), |acc, d| acc * d);
        let log_torsion = big_ln_abs(&torsion_order);
        Self { degree, index, betti, divisors, torsion_order, log_torsion, log_torsion_normalized: log_torsion / index as f64 }
    }
}

mod big_one {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

mod big_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(|d| d.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

fn check_lattice(num_vars: usize, h: &Sublattice) -> Result<()> {
    if num_vars != h.rank() {
        return Err(Error::Dimension(format!("{num_vars}-variable complex over a rank {} lattice", h.rank())));
    }
    Ok(())
}

/// `H_i(C ⊗ Z[G/H])`.
///
/// `H_0` is the cokernel of the specialized `d_1` and goes through
/// [`module_cover_homology`]. In higher degrees the torsion is read off the
/// Smith form of the specialized `d_{i+1}` in the ambient `C_i`: the image
/// lies in `ker d_i`, which is a pure subgroup because `C_i / ker d_i` embeds
/// in the free group `C_{i-1}`, so `C_i / im d_{i+1}` and
/// `ker d_i / im d_{i+1}` have the same torsion.
pub fn cover_homology(c: &ChainComplex, h: &Sublattice, i: usize) -> Result<CoverHomologyReport> {
    check_lattice(c.num_vars(), h)?;
    if i > c.top_degree() {
        return Err(Error::Dimension(format!("degree {i} above the top degree {}", c.top_degree())));
    }
    if i == 0 {
        let d1 = c.differential(1).expect("at least one differential");
        let (betti, divisors) = module_cover_homology(&Presentation::new(d1.clone()), h)?;
        return Ok(CoverHomologyReport::new(0, h.index(), betti, divisors));
    }
    let k = h.index();
    let into = specialize_to_quotient(c.differential(i).unwrap(), h)?.blocks.rank();
    let (out_rank, divisors) = match c.differential(i + 1) {
        Some(d) => {
            let s = smith_normal_form(&specialize_to_quotient(d, h)?.blocks, false);
            (s.rank, s.torsion_divisors())
        }
        None => (0, Vec::new()),
    };
    let betti = c.ranks()[i] as u64 * k - into as u64 - out_rank as u64;
    Ok(CoverHomologyReport::new(i, k, betti, divisors))
}

/// Betti number and invariant factors of `M ⊗ Z[G/H]` for the module `M`
/// presented by `p`.
///
/// The presentation is simplified first. Free generators contribute
/// `[G:H]` each; when what remains is diagonal and `G/H` is cyclic, each
/// entry goes through [`cyclic_module_homology`]; everything else is a Smith
/// form of the dense specialization.
pub fn module_cover_homology(p: &Presentation, h: &Sublattice) -> Result<(u64, Vec<BigInt>)> {
    check_lattice(p.num_vars(), h)?;
    let k = h.index();
    let (free, simple) = p.simplify();
    let mut betti = free as u64 * k;
    let mut orders: Vec<BigInt> = Vec::new();
    let a = simple.matrix();
    if a.rows() == 0 {
        return Ok((betti, orders));
    }
    let diagonal = diagonal_entries(a);
    let cyclic = diagonal.as_ref().and_then(|d| CyclicQuotient::tuned(h, &d.iter().collect::<Vec<_>>()));
    match (diagonal, cyclic) {
        (Some(entries), Some(q)) => {
            for g in &entries {
                let (b, div) = match cyclic_module_homology(&q.image(g), q.modulus) {
                    Some(r) => r,
                    None => dense_cokernel(&LaurentMat::diagonal(g.num_vars(), vec![g.clone()])?, h)?,
                };
                betti += b;
                orders.extend(div);
            }
        }
        _ => {
            let (b, div) = dense_cokernel(a, h)?;
            betti += b;
            orders = div;
        }
    }
    Ok((betti, invariant_factors(&orders)))
}

fn dense_cokernel(a: &LaurentMat, h: &Sublattice) -> Result<(u64, Vec<BigInt>)> {
    let q = specialize_to_quotient(a, h)?;
    let s = smith_normal_form(&q.blocks, false);
    Ok(((q.blocks.rows() - s.rank) as u64, s.torsion_divisors()))
}

/// The entries of a matrix with exactly one nonzero entry in every row and
/// every column.
fn diagonal_entries(a: &LaurentMat) -> Option<Vec<LaurentPoly>> {
    let mut out = Vec::with_capacity(a.rows());
    let mut used = vec![false; a.cols()];
    for i in 0..a.rows() {
        let nz: Vec<usize> = (0..a.cols()).filter(|&j| !a.get(i, j).is_zero()).collect();
        if nz.len() != 1 || used[nz[0]] {
            return None;
        }
        used[nz[0]] = true;
        out.push(a.get(i, nz[0]).clone());
    }
    used.iter().all(|&u| u).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn resolution_examples() {
        let c = ChainComplex::resolution(&poly("t1^2 - 3*t1 + 1"));
        let r = cover_homology(&c, &Sublattice::cyclic(5).unwrap(), 0).unwrap();
        assert_eq!(r.torsion_order, BigInt::from(121));
        assert_eq!(r.betti, 0);
        let r = cover_homology(&c, &Sublattice::cyclic(2).unwrap(), 0).unwrap();
        assert_eq!(r.torsion_order, BigInt::from(5));
        let id = ChainComplex::resolution(&poly("1"));
        let r = cover_homology(&id, &Sublattice::cyclic(7).unwrap(), 0).unwrap();
        assert_eq!((r.betti, r.torsion_order.clone()), (0, BigInt::one()));
        let r1 = cover_homology(&id, &Sublattice::cyclic(7).unwrap(), 1).unwrap();
        assert_eq!(r1.betti, 0);
    }

    #[test]
    fn module_route_matches_dense_route() {
        let cases = ["1 + t1 + t2", "2 - t1*t2", "t1^2 + t2 - 1", "3 + t1"];
        let lattices = [
            Sublattice::from_generators(vec![vec![5, 0], vec![2, 1]]).unwrap(),
            Sublattice::from_generators(vec![vec![3, 1], vec![1, 4]]).unwrap(),
            Sublattice::diagonal(&[2, 4]).unwrap(),
            Sublattice::scalar(2, 3).unwrap(),
        ];
        for s in cases {
            let p = LaurentPoly::parse_with_vars(s, 2).unwrap();
            let pres = Presentation::diagonal(2, vec![p.clone()]).unwrap();
            for h in &lattices {
                let fast = module_cover_homology(&pres, h).unwrap();
                let (b, d) = dense_cokernel(pres.matrix(), h).unwrap();
                assert_eq!(fast, (b, invariant_factors(&d)), "{s} over {h}");
            }
        }
    }

    #[test]
    fn null_alexander_case_splits_free_part() {
        let pres = Presentation::diagonal(1, vec![LaurentPoly::zero(1), poly("t1^2 - 3*t1 + 1")]).unwrap();
        let (b, d) = module_cover_homology(&pres, &Sublattice::cyclic(5).unwrap()).unwrap();
        assert_eq!(b, 5);
        assert_eq!(d, vec![BigInt::from(11), BigInt::from(11)]);
    }

    #[test]
    fn report_serializes_big_integers_as_strings() {
        let r = CoverHomologyReport::new(1, 4, 0, vec![BigInt::from(3), BigInt::from(6)]);
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["torsion_order"], "18");
        assert_eq!(j["divisors"][1], "6");
        let back: CoverHomologyReport = serde_json::from_value(j).unwrap();
        assert_eq!(back, r);
    }
}
