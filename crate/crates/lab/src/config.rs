//! Experiment configuration: one JSON document per run.

use std::path::{Path, PathBuf};

use abtorsion::covers::Schedule;
use abtorsion::mahler::Strategy;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};
use crate::input::InputSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// `m(P)` of the input polynomial.
    Mahler,
    /// Elementary ideals of the input presentation.
    Alexander,
    /// Homology of the covers given by `schedule` and `lattices`.
    CoverHomology,
    /// Normalized log torsion along `N Z` against `m(Delta)`.
    ConvergeCyclic,
    /// Normalized log torsion along `G_{p,M}` against `m(Delta)`.
    ConvergeGpm,
    /// `log det'(A_H) / [G:H]` against `log det_FK(A)`.
    FkdetApprox,
    /// Cover Betti numbers against their l2 prediction.
    BettiDeviation,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Mahler => "mahler",
            Self::Alexander => "alexander",
            Self::CoverHomology => "cover_homology",
            Self::ConvergeCyclic => "converge_cyclic",
            Self::ConvergeGpm => "converge_gpm",
            Self::FkdetApprox => "fkdet_approx",
            Self::BettiDeviation => "betti_deviation",
        }
    }

    pub(crate) fn uses_lattices(self) -> bool {
        !matches!(self, Self::Mahler | Self::Alexander)
    }
}

/// How cover homology is computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// The presented module tensored with `Z[G/H]`.
    #[default]
    Module,
    /// `H_i` of the specialized chain complex.
    Complex,
    /// Order only, as `|Res(Delta, t^N - 1)|`; cyclic covers of one variable.
    Resultant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub input: InputSpec,
    /// Directory receiving `steps.csv` and `summary.json`.
    pub output: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
    /// Extra lattices, each given by generator rows.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lattices: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub route: Route,
    /// Homology degree for the complex route; 1 for group presentations and
    /// 0 otherwise by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    /// Mahler strategy for `mahler` and for the convergence targets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Strategy>,
    /// Deviation constant for `betti_deviation`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    /// Overrides the computed target value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> LabResult<Self> {
        let c: Self = serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
        c.check()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::Input(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn check(&self) -> LabResult<()> {
        let steps = self.schedule.as_ref().map_or(0, Schedule::len) + self.lattices.len();
        if self.kind.uses_lattices() && steps == 0 {
            return Err(LabError::Config(format!("`{}` needs a schedule or lattices", self.kind.name())));
        }
        if self.kind == Kind::ConvergeGpm && !matches!(self.schedule, Some(Schedule::Gpm { .. })) {
            return Err(LabError::Config("`converge_gpm` needs a gpm schedule".into()));
        }
        if self.kind == Kind::ConvergeCyclic && !matches!(self.schedule, Some(Schedule::Cyclic { .. })) {
            return Err(LabError::Config("`converge_cyclic` needs a cyclic schedule".into()));
        }
        if let Some(c) = self.constant {
            if !(c.is_finite() && c > 0.0) {
                return Err(LabError::Config("`constant` must be positive".into()));
            }
        }
        Ok(())
    }
}
