//! Torsion growth along schedules of sublattices, and deviation of cover
//! Betti numbers from their ℓ² prediction.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_lattice, cover_homology, CoverHomologyReport};
use crate::alexmod::ChainComplex;
use crate::error::{Error, Result};
use crate::lattice::{construct_gpm, Sublattice, MAX_ALPHA_RANK};

pub const CSV_HEADER: &str = "schedule_param,index,alpha,betti,torsion_order,log_torsion_normalized";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Schedule {
    /// `N Z` in one variable, `N Z^m` otherwise.
    Cyclic { ns: Vec<u64> },
    /// `G_{p,M}` for each `(p, M)`.
    Gpm { steps: Vec<(u64, u64)> },
}

impl Schedule {
    pub fn len(&self) -> usize {
        match self {
            Self::Cyclic { ns } => ns.len(),
            Self::Gpm { steps } => steps.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Label of step `k` as printed in the `schedule_param` column.
    pub fn param(&self, k: usize) -> String {
        match self {
            Self::Cyclic { ns } => ns[k].to_string(),
            Self::Gpm { steps } => format!("{}:{}", steps[k].0, steps[k].1),
        }
    }

    /// The lattice of step `k` for ambient rank `m`, with a warning when a
    /// `G_{p,M}` modulus is below the bound that guarantees `alpha >= p`.
    pub fn lattice(&self, k: usize, m: usize) -> Result<(Sublattice, Option<String>)> {
        match self {
            Self::Cyclic { ns } => Ok((Sublattice::scalar(m, ns[k])?, None)),
            Self::Gpm { steps } => {
                let (p, modulus) = steps[k];
                let (h, spec) = construct_gpm(m, p, modulus)?;
                let warning = (!spec.alpha_guaranteed()).then(|| {
                    format!(
                        "step {}: M = {modulus} does not exceed m * p_1 ... p_m = {}; alpha >= {p} is not guaranteed",
                        self.param(k),
                        spec.alpha_threshold()
                    )
                });
                Ok((h, warning))
            }
        }
    }

    fn warnings(&self) -> Vec<String> {
        match self {
            Self::Cyclic { ns } if ns.windows(2).any(|w| w[0] >= w[1]) => {
                vec!["cyclic schedule is not strictly increasing".to_string()]
            }
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthStep {
    pub param: String,
    pub lattice: Sublattice,
    /// `None` above the rank supported by the exhaustive search.
    pub alpha: Option<u64>,
    pub report: CoverHomologyReport,
}

impl GrowthStep {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.11e}",
            self.param,
            self.report.index,
            self.alpha.map(|a| a.to_string()).unwrap_or_default(),
            self.report.betti,
            self.report.torsion_order,
            self.report.log_torsion_normalized
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthSequence {
    pub degree: usize,
    pub steps: Vec<GrowthStep>,
    pub warnings: Vec<String>,
}

impl GrowthSequence {
    /// Header plus one row per step, newline-terminated.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for s in &self.steps {
            out.push_str(&s.csv_row());
            out.push('\n');
        }
        out
    }
}

fn alpha_of(h: &Sublattice) -> Option<u64> {
    (h.rank() <= MAX_ALPHA_RANK).then(|| h.alpha_min_norm().ok()).flatten()
}

/// `H_i` of every cover in the schedule, computed in parallel and reported
/// in schedule order.
pub fn torsion_growth_sequence(c: &ChainComplex, i: usize, schedule: &Schedule) -> Result<GrowthSequence> {
    let m = c.num_vars();
    let steps: Vec<(GrowthStep, Option<String>)> = (0..schedule.len())
        .into_par_iter()
        .map(|k| {
            let (h, warning) = schedule.lattice(k, m)?;
            let report = cover_homology(c, &h, i)?;
            Ok((GrowthStep { param: schedule.param(k), alpha: alpha_of(&h), lattice: h, report }, warning))
        })
        .collect::<Result<_>>()?;
    let mut warnings = schedule.warnings();
    warnings.extend(steps.iter().filter_map(|(_, w)| w.clone()));
    Ok(GrowthSequence { degree: i, steps: steps.into_iter().map(|(s, _)| s).collect(), warnings })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BettiDeviation {
    pub degree: usize,
    pub betti: u64,
    /// `[G:H] * b_i^(2)(C)`.
    pub l2_prediction: u64,
    pub deviation: u64,
    /// `[G:H] / alpha(H)`.
    pub bound: f64,
    pub within: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BettiDeviationReport {
    pub index: u64,
    pub alpha: u64,
    pub constant: f64,
    pub degrees: Vec<BettiDeviation>,
}

impl BettiDeviationReport {
    pub fn violations(&self) -> usize {
        self.degrees.iter().filter(|d| !d.within).count()
    }

    /// Largest `deviation / bound` over all degrees.
    pub fn max_ratio(&self) -> f64 {
        self.degrees.iter().map(|d| d.deviation as f64 / d.bound).fold(0.0, f64::max)
    }
}

/// `|b_i(C_H) - [G:H] b_i^(2)(C)|` against `constant * [G:H] / alpha(H)`
/// in every degree.
pub fn betti_deviation_report(c: &ChainComplex, h: &Sublattice, constant: f64) -> Result<BettiDeviationReport> {
    check_lattice(c.num_vars(), h)?;
    let alpha = h.alpha_min_norm()?;
    if alpha == 0 {
        return Err(Error::InfiniteIndex);
    }
    let k = h.index();
    let ranks: Vec<u64> =
        c.differentials().par_iter().map(|d| Ok(super::specialize_to_quotient(d, h)?.blocks.rank() as u64)).collect::<Result<_>>()?;
    let l2 = c.homology_ranks();
    let bound = k as f64 / alpha as f64;
    let degrees = (0..=c.top_degree())
        .map(|i| {
            let into = if i >= 1 { ranks[i - 1] } else { 0 };
            let out = ranks.get(i).copied().unwrap_or(0);
            let betti = c.ranks()[i] as u64 * k - into - out;
            let l2_prediction = l2[i] as u64 * k;
            let deviation = betti.abs_diff(l2_prediction);
            BettiDeviation { degree: i, betti, l2_prediction, deviation, bound, within: deviation as f64 <= constant * bound }
        })
        .collect();
    Ok(BettiDeviationReport { index: k, alpha, constant, degrees })
}
