use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the planner.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameters that make the scenario or the run impossible to set up.
    #[error("configuration error: {0}")]
    Config(String),

    /// A scenario, config or deployment file could not be decoded.
    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("degenerate geometry: {0}")]
    Geometry(String),

    /// A link whose rate is not strictly positive; the associated delay is unbounded.
    #[error("infeasible link: {0}")]
    InfeasibleLink(String),

    /// The run finished but produced no feasible plan.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error: 1 for configuration/input problems,
    /// 2 for runtime infeasibility.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InfeasibleLink(_) | Error::Infeasible(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
