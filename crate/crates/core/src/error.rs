use thiserror::Error;

/// Errors raised by gyrokit operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector must have at least one coordinate")]
    EmptyVector,

    #[error("non-finite value in input")]
    NonFinite,

    #[error("point outside the ball: norm {norm} is not below {limit}")]
    OutsideBall { norm: f64, limit: f64 },

    #[error("the zero vector does not determine a diameter")]
    ZeroVector,

    #[error("unsupported dimension {dim}: at least {min} required")]
    UnsupportedDimension { dim: usize, min: usize },

    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("not a density matrix: trace {trace}")]
    NotUnitTrace { trace: f64 },

    #[error("determinant {det} is not 1")]
    NotUnitDeterminant { det: f64 },

    #[error("map output leaves the ball at input {input:?}: output norm {norm}")]
    MapOutsideBall { input: Vec<f64>, norm: f64 },

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unknown property `{name}`; registered: {}", registered.join(", "))]
    UnknownProperty {
        name: String,
        registered: Vec<String>,
    },

    #[error("inconclusive classification: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;
