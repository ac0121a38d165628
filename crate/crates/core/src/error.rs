use thiserror::Error;

/// Errors raised by the library. Violations found by the property checkers
/// are reported as data, not through this type.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("degenerate ensemble: {0}")]
    Degenerate(String),

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("under-resolved fit: {reason} (smallest usable epsilon: {smallest_usable:?})")]
    UnderResolved {
        reason: String,
        smallest_usable: Option<f64>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
