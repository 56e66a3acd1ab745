use thiserror::Error;

/// Errors produced by the simulation and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input text could not be parsed. `offset` is a byte offset into the source.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// Not enough samples for the requested analysis.
    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// Realizations or matrices do not share the same time grid.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// The request would exceed a practical resource bound.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Malformed tabular or JSON data.
    #[error("data error: {0}")]
    Data(String),

    #[error("io error: {0}")]
    Io(String),

    /// An error raised while processing one item of a batch.
    #[error("realization {index}: {source}")]
    Item { index: usize, source: Box<Error> },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// The innermost error, looking through [`Error::Item`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Item { source, .. } => source.root(),
            other => other,
        }
    }

    /// Stable machine-readable code used by the HTTP API and CLI diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain_error",
            Error::Parse { .. } => "parse_error",
            Error::InsufficientData { .. } => "insufficient_data",
            Error::GridMismatch(_) => "grid_mismatch",
            Error::Resource(_) => "resource_limit",
            Error::Data(_) => "data_error",
            Error::Io(_) => "io_error",
            Error::Item { source, .. } => source.code(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
