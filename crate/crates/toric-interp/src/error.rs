use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit-code contract:
/// user-facing validation/domain/parse/configuration problems exit with 2,
/// internal invariant violations exit with 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),
    #[error("triangle has a vertical edge; shear it away explicitly before retrying")]
    VerticalEdge,
    #[error("normalization needs integer data: {0}")]
    NormalizationIntegrality(String),
    #[error("normalized support does not have the required column profile: {0}")]
    NormalizationStructure(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvariantViolation(_) => 3,
            _ => 2,
        }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }
}
