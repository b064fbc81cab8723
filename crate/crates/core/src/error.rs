use thiserror::Error;

/// Errors raised by the surgery calculus.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("no braid relation side at position {pos}")]
    NoBraidMatch { pos: usize },

    #[error("segment {pos}..{end} out of range for word of length {len}")]
    Range { pos: usize, end: usize, len: usize },

    #[error("unclassifiable block at position {position}: {reason}")]
    Unclassifiable { position: usize, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource exhausted: no {0} left")]
    ResourceExhausted(&'static str),

    #[error("no pending blown-up fishtail to smooth")]
    MissingPendingFishtail,

    #[error("operation requires b2+ > 1, found {0}")]
    InsufficientB2Plus(i64),

    #[error("configuration mismatch: {0}")]
    Configuration(String),

    #[error("infeasible recipe: {0}")]
    Infeasible(String),

    #[error("twist parameter r = {0} is rejected: fibered knot with monic Alexander polynomial")]
    FiberedTwistKnot(u64),

    #[error("polynomial with {0} terms is too large to expand")]
    TooLarge(u128),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
