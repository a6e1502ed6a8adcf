use thiserror::Error;

/// Errors reported by the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// The instance does not satisfy the hypotheses of the requested closed form.
    #[error("wrong solver: {0}")]
    WrongSolver(String),
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("property violation: {0}")]
    PropertyViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
