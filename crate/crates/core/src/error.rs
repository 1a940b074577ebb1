use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// No finite subset below the horizon reaches the requested submeasure level.
    #[error("horizon {horizon} cannot certify submeasure level {level}")]
    HorizonExhausted { level: u64, horizon: u64 },

    #[error("no sublist of the generators covers the prefix below {horizon}")]
    NotCovered { horizon: u64 },

    #[error("search space too large: {what}")]
    TooLarge { what: String },

    #[error("selector recursion exceeded the declared front depth {depth}")]
    DepthExhausted { depth: usize },

    #[error("x prefix of length {have} is too short; a leaf needs {need} bits")]
    PrefixTooShort { have: usize, need: usize },

    #[error("invalid labeled tree: {0}")]
    InvalidTree(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cannot parse literal: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
