use thiserror::Error;

/// Errors produced anywhere in the toolkit.
///
/// The CLI maps these onto exit categories: parse/config problems exit 2,
/// resource caps exit 3, failed verification assertions exit 4.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("group spec mismatch: {0}")]
    SpecMismatch(String),

    #[error("resource cap exceeded: {what} reached {size} (cap {cap})")]
    Resource {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("element {0} is outside the enumerated ball")]
    OutsideBall(String),

    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
