use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("the exact rational backend cannot represent {0}")]
    UnsupportedConstant(&'static str),

    #[error("invalid path geometry: {0}")]
    Validation(String),

    #[error("accuracy target not met: {0}")]
    Accuracy(String),

    #[error("paths are not composable: {0}")]
    Composition(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
