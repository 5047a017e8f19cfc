use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config: {0}")]
    Config(String),
    #[error("solver: {0}")]
    Solver(#[from] blockade_core::Error),
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("correspondence check failed")]
    CheckFailed,
}

impl LabError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    /// 2 for bad input, 3 for solver failures, 4 for a failed check.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::MissingColumn(_) | Self::Io(_) | Self::Csv(_) => 2,
            Self::Solver(_) => 3,
            Self::CheckFailed => 4,
        }
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
