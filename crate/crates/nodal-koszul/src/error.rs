use thiserror::Error;

/// Errors surfaced by the engine.
///
/// `Invariant` is reserved for theorem-backed conditions: if one fires on
/// validated input, the model construction itself is wrong and the run must
/// abort rather than emit a certificate.
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid bundle: {0}")]
    InvalidBundle(String),

    #[error("bundle not base point free")]
    NotBasePointFree,

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
