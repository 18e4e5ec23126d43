//! Harness around `gccl-core`: dataset presets, the formation and
//! incremental benchmarks, reports and oracle cross-checks.

use std::path::Path;

pub mod bench;
pub mod dataset;
pub mod verify;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Data(format!("{}: {err}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<gccl_core::Error> for CliError {
    fn from(err: gccl_core::Error) -> Self {
        CliError::Data(err.to_string())
    }
}
