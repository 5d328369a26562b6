use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("step index {n} out of range 1..={max}")]
    StepOutOfRange { n: usize, max: usize },

    #[error("quadrature did not converge (estimated error {estimate:.3e})")]
    QuadratureNonConvergence { estimate: f64 },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("newton damping floor reached at iteration {iteration} (residual {residual:.3e})")]
    DampingFloor { iteration: usize, residual: f64 },

    #[error("inner linear solve failed in newton iteration {iteration}: {source}")]
    InnerSolve {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("solver failure at step {step} (t = {t:.6e}): {source}")]
    Step {
        step: usize,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("config line {line}: {msg}")]
    ConfigLine { line: usize, msg: String },

    #[error("config field `{field}`: {msg}")]
    ConfigField { field: String, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed data: {msg}")]
    Parse { path: PathBuf, msg: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the user's configuration or arguments rather
    /// than by a numerical failure.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_) | Error::ConfigLine { .. } | Error::ConfigField { .. }
        )
    }

    /// True for failures of a linear/nonlinear solver or quadrature.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::DampingFloor { .. }
                | Error::InnerSolve { .. }
                | Error::Step { .. }
                | Error::QuadratureNonConvergence { .. }
        )
    }
}
