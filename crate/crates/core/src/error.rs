use thiserror::Error;

/// Errors shared by every module of the lab.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RmtError {
    /// A caller-supplied parameter is outside its valid range.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An exhaustive enumeration would exceed its documented budget.
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    /// Input violates a structural precondition (non-Hermitian, cyclic graph, bad tableau).
    #[error("contract violation: {0}")]
    Contract(String),
    /// An iterative solver did not converge within its iteration cap.
    #[error("convergence failure: {0}")]
    Convergence(String),
}

pub type Result<T> = std::result::Result<T, RmtError>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(RmtError::Parameter(msg.into()))
}
