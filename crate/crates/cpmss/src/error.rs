use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid static configuration (bad taps, zero seed, out-of-range factor, ...).
    #[error("configuration error: {0}")]
    Config(String),
    /// Malformed runtime input (length mismatch, symbol outside alphabet, ...).
    #[error("input error: {0}")]
    Input(String),
    /// Numerical routine failed to meet its tolerance.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// I/O while reading configs or writing results.
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// Config file parse failure.
    #[error("config parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
