use thiserror::Error;

/// Errors reported by validation and by operations with restricted domains.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A configuration value or combination is unusable.
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    /// The computation ratio is undefined before any multiplication is counted.
    #[error("computation ratio undefined: no multiplications counted")]
    UndefinedRatio,
}

pub type Result<T> = std::result::Result<T, Error>;
