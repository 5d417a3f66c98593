//! Error-to-exit-code mapping: 1 input, 2 empty plausible intersection,
//! 3 numeric non-convergence.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    EmptyIntersection(String),
    #[error("{0}")]
    NonConvergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::EmptyIntersection(_) => 2,
            CliError::NonConvergence(_) => 3,
        }
    }
}

impl From<klmix::Error> for CliError {
    fn from(err: klmix::Error) -> Self {
        match &err {
            klmix::Error::NoPlausibleMember { .. } => CliError::EmptyIntersection(err.to_string()),
            klmix::Error::NoConvergence { .. }
            | klmix::Error::MleFailure { .. }
            | klmix::Error::QuadratureFailure { .. } => CliError::NonConvergence(err.to_string()),
            _ => CliError::Input(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Input(err.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::Input(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Input(err.to_string())
    }
}
