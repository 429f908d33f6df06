use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid carpet: {0}")]
    InvalidCarpet(String),

    #[error("invalid iterated function system: {0}")]
    InvalidIfs(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An enumeration would touch more words than the configured budget allows.
    #[error("enumeration budget exceeded: {needed} words requested, limit is {limit}")]
    BudgetExceeded { needed: u128, limit: u64 },

    /// Scaled integer offsets no longer fit in 128 bits.
    #[error("scaled offset overflow at depth {depth}")]
    Overflow { depth: usize },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
