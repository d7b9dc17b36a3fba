//! Experiment runner: JSON configs, cached per-step results, CSV and JSON
//! reports. The `lab` binary is a thin command-line layer over
//! [`run_experiment`].

pub mod cache;
pub mod config;
pub mod error;
pub mod input;
pub mod report;
pub mod run;
pub mod tools;

pub use config::{ExperimentConfig, Kind, Route};
pub use error::{LabError, LabResult};
pub use input::{InputSpec, Subject};
pub use report::Summary;
pub use run::{run_experiment, RunOptions, RunOutcome, StepResult};

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "LAB_CACHE_DIR";
