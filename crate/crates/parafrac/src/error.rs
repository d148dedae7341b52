use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric or structural argument violates an operation's precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The operation is well-formed but undefined for these inputs
    /// (e.g. an isotropy test in one dimension).
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// Not enough usable data to produce a result (e.g. too few scale
    /// levels left after window trimming).
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A probe finished without a usable verdict; the message carries
    /// guidance on how to widen the search.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// Configuration file or flag validation failure. The message names
    /// the violated precondition.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
