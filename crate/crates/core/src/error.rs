use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments: out-of-range indices, duplicate labels, sizes.
    #[error("invalid input: {0}")]
    Input(String),

    /// An operation was handed a context that does not meet its
    /// precondition (e.g. a non-reduced context for the row-level test).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Exponential enumeration or search refused because the ground set is
    /// larger than the configured cap.
    #[error("{what}: ground set of size {size} exceeds cap {cap} (raise the cap explicitly to proceed)")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
