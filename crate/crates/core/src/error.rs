use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("party dimensions must be at least 2, got {m}x{n}")]
    InvalidDims { m: usize, n: usize },

    #[error("dimension mismatch: expected side {expected}, got {rows}x{cols}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace deviates from one: {trace}")]
    TraceDeviation { trace: f64 },

    #[error("negative eigenvalue {min_eigenvalue:e}")]
    NegativeEigenvalue { min_eigenvalue: f64 },

    #[error("state vector norm {norm} is not one")]
    NotNormalized { norm: f64 },

    #[error(
        "coefficient matrix is not in canonical Schmidt form (off-diagonal weight {offdiag:e})"
    )]
    NotSchmidtForm { offdiag: f64 },

    #[error("invalid generator pair ({j}, {k}) for dimension {dim}")]
    InvalidPair { j: usize, k: usize, dim: usize },

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("rotation matrix is not orthogonal (deviation {deviation:e})")]
    NotOrthogonal { deviation: f64 },

    #[error("generator and observable act on different subspaces")]
    PairMismatch,

    #[error("observable triads have different orientations")]
    MixedOrientation,

    #[error("subspace carries no weight (C = {c:e})")]
    EmptySubspace { c: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("shot count must be positive")]
    NoShots,

    #[error("malformed state document: {0}")]
    Malformed(String),
}
