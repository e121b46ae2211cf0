use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const TOLERANCE: i32 = 3;
    pub const NON_CONVERGENCE: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("numerical failure: {0}")]
    NonConvergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Read { .. } | CliError::Write { .. } => exit::CONFIG,
            CliError::NonConvergence(_) => exit::NON_CONVERGENCE,
        }
    }
}

pub(crate) fn config(msg: impl std::fmt::Display) -> CliError {
    CliError::Config(msg.to_string())
}

/// What a command finished with, once its artifacts are on disk.
#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok,
    ToleranceFailure(String),
    NonConvergence(String),
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok => exit::SUCCESS,
            Status::ToleranceFailure(_) => exit::TOLERANCE,
            Status::NonConvergence(_) => exit::NON_CONVERGENCE,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub status: Status,
}
