use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while configuring or running a simulation study.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid vaccine-type distribution: {0}")]
    InvalidDistribution(String),

    #[error("first-dose curve {path}: {reason}")]
    Curve { path: PathBuf, reason: String },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot parse {path}: {reason}")]
    Parse { path: PathBuf, reason: String },

    #[error(transparent)]
    Estimation(#[from] EstimationError),

    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

/// Failures of the two likelihood fitters and the summary statistics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimationError {
    #[error("dataset contains no events")]
    NoEvents,

    #[error("no case carries both exposed and unexposed observation time")]
    NoInformativeCases,

    #[error("standard error must be positive, got {0}")]
    NonPositiveSe(f64),

    #[error("invalid binomial counts: {successes} successes out of {trials}")]
    InvalidCounts { successes: u64, trials: u64 },

    #[error("confidence level must lie in (0, 1), got {0}")]
    InvalidLevel(f64),

    #[error("need at least {needed} converged replications, got {got}")]
    TooFewReplications { needed: usize, got: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
