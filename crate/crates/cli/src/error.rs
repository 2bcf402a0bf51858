use beamcomb::{EngineError, FilterError, StatsError};
use thiserror::Error;

/// Exit codes are a stable contract: 0 success, 2 configuration or usage
/// error, 3 runtime numeric error. I/O failures map to 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(err: EngineError) -> Self {
        match &err {
            EngineError::Filter(FilterError::Degenerate) => CliError::Numeric(err.to_string()),
            _ => CliError::Config(err.to_string()),
        }
    }
}

impl From<StatsError> for CliError {
    fn from(err: StatsError) -> Self {
        match &err {
            StatsError::Engine(EngineError::Filter(FilterError::Degenerate)) => {
                CliError::Numeric(err.to_string())
            }
            _ => CliError::Config(err.to_string()),
        }
    }
}
