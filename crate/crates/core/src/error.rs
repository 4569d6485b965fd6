use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("channel index {index} outside [1, {k}]")]
    ChannelOutOfRange { index: usize, k: usize },

    #[error("subset members must be strictly increasing")]
    UnsortedSubset,

    #[error("feedback index {value} out of range for C({k}, {m})")]
    IndexOutOfRange { value: String, k: usize, m: usize },

    #[error("subset size {m} invalid for universe of {k} channels")]
    SubsetSize { m: usize, k: usize },

    #[error("invalid fading parameters: {0}")]
    InvalidFading(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("tail computation failed: {0}")]
    Tail(String),

    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
