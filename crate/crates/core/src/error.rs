use thiserror::Error;

/// Errors raised by the operator-algebra routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not an orthogonal projection: {0}")]
    NotProjection(String),

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("invalid algebra context: {0}")]
    InvalidContext(String),

    #[error("element does not belong to the algebra context: {0}")]
    ContextMismatch(String),

    #[error("context is not abelian")]
    NonAbelian,

    #[error("projections are not pairwise orthogonal (pair {0}, {1})")]
    NotOrthogonal(usize, usize),

    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("invalid spectral family: {0}")]
    InvalidFamily(String),

    #[error("wrong continuity flag: expected {expected}, found {found}")]
    WrongContinuity { expected: String, found: String },

    #[error("no piece of the step function contains the quasipoint")]
    PartitionViolation,

    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),

    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),

    #[error("projection is not below the required bound: {0}")]
    NotBelow(String),

    #[error("invalid quasipoint: {0}")]
    InvalidQuasipoint(String),

    #[error("trial count must be at least 1")]
    InvalidTrials,

    #[error("invalid mixture weights: {0}")]
    InvalidWeights(String),

    #[error("vectors are not orthonormal: {0}")]
    NotOrthonormal(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
