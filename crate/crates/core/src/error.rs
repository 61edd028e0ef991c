use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A named physical parameter is out of its admissible range.
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("length mismatch: expected {expected} samples, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("field contains non-finite amplitudes")]
    NonFinite,

    #[error("cannot normalize a zero field")]
    ZeroNorm,

    #[error("optical train is empty")]
    EmptyTrain,

    #[error("element {0} is not a mask")]
    NotAMask(&'static str),

    #[error("no coincidences: the outcome filter selected no ensemble member")]
    NoCoincidences,

    #[error("pattern is identically zero in the visibility window")]
    ZeroPattern,

    #[error("{0} requires an Alice measurement basis")]
    BasisRequired(&'static str),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
