use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("malformed config: {0}")]
    Config(String),
    #[error("input: {0}")]
    Input(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Compute(#[from] abtorsion::Error),
}

impl LabError {
    /// 1 for problems with the invocation or its inputs, 2 for failures
    /// while computing or writing results.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Config(_) | Self::Input(_) => 1,
            Self::Io { .. } | Self::Compute(_) => 2,
        }
    }
}

impl LabError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    pub(crate) fn input(e: abtorsion::Error) -> Self {
        Self::Input(e.to_string())
    }
}

pub type LabResult<T> = std::result::Result<T, LabError>;
