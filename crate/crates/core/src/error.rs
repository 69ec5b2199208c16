use thiserror::Error;

/// Failure modes shared by every stage of the pipeline.
#[derive(Debug, Error)]
pub enum CpmError {
    /// Inconsistent or unsupported user configuration.
    #[error("configuration error: {0}")]
    Config(String),
    /// A query or evaluation point lies outside the region where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical routine failed (singular factorization, no convergence, ...).
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A configured resource budget was exceeded.
    #[error("resource error: {0}")]
    Resource(String),
    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),
    /// An internal invariant was violated; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CpmError>;
