//! Error type shared across the crate, categorized so the CLI can map each
//! failure class to a distinct exit code.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input text could not be parsed; `position` is a byte offset into the input.
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    /// A step budget or size bound was exceeded before the computation finished.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// The input violates a documented precondition of the operation.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse { position, message: message.into() }
    }

    pub fn budget(message: impl Into<String>) -> Self {
        Error::Budget(message.into())
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }
}
