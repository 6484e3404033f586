use thiserror::Error;

/// Errors raised by the exact computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The digit provider stopped before the computation could be decided.
    #[error("insufficient precision: partial quotient a_{required} is needed but the expansion stops at depth {available}")]
    InsufficientPrecision { required: usize, available: usize },

    #[error("invalid partial quotient {value} at index {index}: partial quotients must be >= 1")]
    InvalidPartialQuotient { index: usize, value: u64 },

    /// A digit word violates `x_1 != 0`, `x_j <= a_j` or `x_{j+1} = 0 => x_j = a_j`.
    #[error("digit word is not admissible at index {index}: {reason}")]
    DigitConstraint { index: usize, reason: String },

    #[error("word {word} is not a factor of the Sturmian language")]
    NotInLanguage { word: String },

    #[error("word length {len} is not of the form q_k - 1")]
    BadWordLength { len: usize },

    #[error("no return found within cap {cap}")]
    CapExceeded { cap: u64 },

    #[error("point prefix has {have} symbols but {need} are required")]
    PrefixTooShort { need: usize, have: usize },

    #[error("value does not fit in 64 bits: {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// Two independent computations disagreed. Always a bug.
    #[error("inconsistent computation: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
