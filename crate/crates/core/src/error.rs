use thiserror::Error;

/// Errors shared by every layer of the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid selector: {0}")]
    InvalidSelector(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("precision exhausted after reaching {bits} bits: {context}")]
    PrecisionExhausted { bits: u32, context: String },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
