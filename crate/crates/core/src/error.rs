use thiserror::Error;

use crate::lp::LpError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A table, LP, or search budget was exceeded.
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),

    /// The input falls outside the class an operation is defined on.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("not found: {0}")]
    NotFound(String),

    /// A computed object failed its own re-verification.
    #[error("invariant failed: {0}")]
    Invariant(String),

    #[error(transparent)]
    Lp(#[from] LpError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::LimitExceeded(_) => 2,
            Error::Lp(LpError::SizeCap { .. }) => 2,
            Error::Invariant(_) => 3,
            Error::Lp(LpError::CertificateFailed(_)) => 3,
            _ => 1,
        }
    }
}
