use std::path::PathBuf;

use num_complex::Complex64;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("degenerate operator: {0}")]
    DegenerateOperator(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// An iterative kernel ran out of budget. `partial` holds whatever was
    /// already deflated (for the eigensolver, the converged eigenvalues).
    #[error("numerical failure in {stage}: {detail}")]
    NumericalFailure {
        stage: &'static str,
        detail: String,
        partial: Vec<Complex64>,
    },

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("solver failure: {detail} (last residual {residual:e})")]
    SolverFailure { detail: String, residual: f64 },

    #[error("branch error: fixed point {m} has non-positive imaginary part")]
    Branch { m: Complex64 },

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io { .. } => 2,
            _ => 3,
        }
    }
}
