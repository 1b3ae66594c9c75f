use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported Coxeter type: {0}")]
    UnsupportedType(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("property violation: {0}")]
    PropertyViolation(String),

    #[error("unrecognized asymptotic ring (fingerprint: {0})")]
    UnrecognizedRing(String),

    #[error("no such cell: {0}")]
    NoSuchCell(String),

    #[error("corrupt cache: {0}")]
    CorruptCache(String),

    #[error("cache version mismatch: {0}")]
    VersionMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
