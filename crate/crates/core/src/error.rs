use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The input carries no usable signal (e.g. an all-zero channel).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("dimension mismatch: {what} (expected {expected}, got {actual})")]
    DimensionMismatch { what: &'static str, expected: usize, actual: usize },

    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
