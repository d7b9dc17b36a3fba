//! Report files: `steps.csv` with fixed float formatting and a
//! `summary.json` whose floats are rounded to 12 significant digits, so
//! reruns produce identical bytes.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Kind;
use crate::error::{LabError, LabResult};

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float")
}

/// The CSV spelling of a float: 12 significant digits in exponent form.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailedStep {
    pub param: String,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub kind: Kind,
    pub input: String,
    pub steps: usize,
    pub completed: usize,
    pub limit_estimate: Option<f64>,
    pub target: Option<f64>,
    pub gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub within_tolerance: Option<bool>,
    #[serde(default)]
    pub details: BTreeMap<String, serde_json::Value>,
    pub warnings: Vec<String>,
    pub failed_steps: Vec<FailedStep>,
}

impl Summary {
    /// Fills `gap` and `within_tolerance` and rounds every float.
    pub(crate) fn finish(mut self) -> Self {
        self.limit_estimate = self.limit_estimate.map(round12);
        self.target = self.target.map(round12);
        self.gap = match (self.limit_estimate, self.target) {
            (Some(a), Some(b)) => Some(round12((a - b).abs())),
            _ => self.gap.map(round12),
        };
        self.within_tolerance = match (self.gap, self.tolerance) {
            (Some(g), Some(t)) => Some(g <= t),
            _ => None,
        };
        for v in self.details.values_mut() {
            round_value(v);
        }
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable summary");
        s.push('\n');
        s
    }
}

fn round_value(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round12).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(round_value),
        serde_json::Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Header plus rows, newline-terminated.
pub fn csv_text(header: &str, rows: &[String]) -> String {
    let mut out = String::with_capacity(header.len() + 1 + rows.iter().map(|r| r.len() + 1).sum::<usize>());
    out.push_str(header);
    out.push('\n');
    for r in rows {
        out.push_str(r);
        out.push('\n');
    }
    out
}

pub(crate) fn write(path: &Path, text: &str) -> LabResult<()> {
    std::fs::write(path, text).map_err(|e| LabError::io(path.to_path_buf(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_and_csv_shapes() {
        assert_eq!(round12(0.962_423_650_119_206_9), 0.962423650119);
        assert_eq!(fmt_float(0.80471895621705), "8.04718956217e-1");
        assert_eq!(csv_text("a,b", &[]), "a,b\n");
        assert_eq!(csv_text("a,b", &["1,2".into()]), "a,b\n1,2\n");
    }
}
