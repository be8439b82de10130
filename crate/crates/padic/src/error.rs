use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PadicError {
    #[error("p-adic precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("local computation failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, PadicError>;

pub(crate) fn exhausted(msg: impl Into<String>) -> PadicError {
    PadicError::PrecisionExhausted(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> PadicError {
    PadicError::Internal(msg.into())
}
