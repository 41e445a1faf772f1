use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("invalid ring extension: {0}")]
    InvalidExtension(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("morphism entry ({row}, {col}) violates the order congruence")]
    Congruence { row: usize, col: usize },
    #[error("invalid diagram: {0}")]
    Diagram(String),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("necklace error: {0}")]
    Necklace(String),
    #[error("vertex set mismatch")]
    VertexMismatch,
    #[error("unknown vertex: {0}")]
    UnknownVertex(String),
    #[error("truncation: {0}")]
    Truncation(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not solvable: {0}")]
    NotSolvable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
