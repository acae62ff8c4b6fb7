use thiserror::Error;

pub type Result<T> = std::result::Result<T, SpinError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpinError {
    #[error("superluminal velocity: |beta| = {speed} must be < 1")]
    Superluminal { speed: f64 },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("invalid Lorentz factor {gamma}: must be >= 1")]
    InvalidFactor { gamma: f64 },

    #[error("gyromagnetic ratio must be nonzero")]
    InvalidRatio,

    #[error("malformed tensor: {0}")]
    MalformedTensor(String),

    #[error("direction vector has zero length")]
    ZeroDirection,

    #[error("operation requires the {expected} model")]
    WrongModel { expected: &'static str },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
