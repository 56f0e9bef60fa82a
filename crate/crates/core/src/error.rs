use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A leading-term precondition of a series operation does not hold.
    #[error("series precondition violated: {0}")]
    Precondition(String),

    /// The requested output window is empty or would be unbounded.
    #[error("window error: {0}")]
    Window(String),

    #[error("not enough derivation coefficients: need {needed}, have {available}")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("alphabet mismatch: expected {expected}, found {found}")]
    AlphabetMismatch { expected: String, found: String },

    #[error("operator term without a positive power of u cannot be exponentiated")]
    NotNilpotent,

    #[error("no substitution image for variable {0}")]
    MissingImage(String),

    /// Two routes that must agree did not. Always a bug, never bad input.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
