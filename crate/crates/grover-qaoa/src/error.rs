use thiserror::Error;

/// Errors shared across the crate.
///
/// The CLI maps these onto exit codes: domain and precondition failures
/// exit with 3, resource limits with 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
