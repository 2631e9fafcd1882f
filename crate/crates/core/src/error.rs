use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value `{value}` does not belong to {quantale}")]
    Mismatch { quantale: String, value: String },
    #[error("value out of range: {0}")]
    Range(String),
    #[error("not implemented: {0}")]
    NotImplemented(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("carrier of size {size} exceeds the powerset cap {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("input is not lawful: {0}")]
    NotLawful(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("internal consistency check failed: {0}")]
    SelfCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
