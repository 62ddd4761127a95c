use thiserror::Error;

/// Errors raised by the library.
///
/// Each variant maps onto one of the CLI's exit classes: invalid arguments are
/// usage errors, resource limits are guard hits, and overflow is reported when
/// an exact count no longer fits the integer width.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit: {what} needs {requested}, limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Short machine-friendly tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::ResourceLimit { .. } => "resource-limit",
            Error::Overflow(_) => "overflow",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
