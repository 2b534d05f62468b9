//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// `q_from_table` only knows the published design tables.
    #[error("no published q table for k = {0}; use the formula profile instead")]
    UnsupportedTableK(usize),

    /// LLR inputs must be finite.
    #[error("non-finite LLR at position {0}")]
    NonFiniteLlr(usize),

    #[error("alist parse error: {0}")]
    AlistParse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
