use thiserror::Error;

/// Failure modes shared by every decision procedure in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The prime is ramified in the cyclotomic field (p = q).
    #[error("unsupported ramified case: {0}")]
    UnsupportedRamified(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
