use crate::group::SpecParseError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Spec(#[from] SpecParseError),
    #[error("unknown generator label `{0}`")]
    UnknownLabel(String),
    #[error("unknown coset {0}")]
    UnknownCoset(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("replacement {step}: word does not start with the replaced prefix")]
    PrefixMismatch { step: usize },
    #[error("weight {weight} exceeds the radius {radius}")]
    RadiusExceeded { weight: u64, radius: u64 },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
