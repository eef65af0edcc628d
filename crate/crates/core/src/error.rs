use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vector is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix has non-complex quaternion entries")]
    NotComplex,

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("operation requires a nonempty region")]
    EmptyRegion,

    #[error("sweep grid must have at least 8 angles, got {0}")]
    InvalidGrid(usize),

    #[error("constraint set D0 ∩ D1 is empty")]
    Infeasible,

    #[error("feasible sampler gave up after {0} retries")]
    RetriesExhausted(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
