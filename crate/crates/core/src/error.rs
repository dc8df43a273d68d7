use thiserror::Error;

/// Errors raised by state, channel and bound computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |m - m^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix has a negative eigenvalue ({0:e})")]
    NegativeEigenvalue(f64),

    #[error("trace differs from 1 by {0:e}")]
    TraceNotOne(f64),

    #[error("factor index {index} out of range for {factors} factors")]
    BadIndex { index: usize, factors: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("rank {rank} is not in 1..={dim}")]
    BadRank { rank: usize, dim: usize },

    #[error("state vector norm differs from 1 by {0:e}")]
    NotNormalized(f64),

    #[error("invalid ensemble: {0}")]
    BadEnsemble(String),

    #[error("Kraus list is empty")]
    EmptyKraus,

    #[error(
        "Kraus operator {index} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}"
    )]
    ShapeMismatch {
        index: usize,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },

    #[error("channel is not trace preserving (completeness defect {0:e})")]
    NotTracePreserving(f64),

    #[error("bad channel parameter: {0}")]
    BadParam(String),

    #[error("matrix is not unitary (defect {0:e})")]
    NotUnitary(f64),

    #[error("argument {0} is outside [0, 1]")]
    OutOfRange(f64),

    #[error("fidelity {0} is outside [0, 1]")]
    BadF(f64),

    #[error("dimension {0} is not supported (need d >= 2)")]
    BadDim(usize),

    #[error("entropy argument {0} is negative")]
    NegativeEntropy(f64),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("factor mismatch: {0}")]
    FactorMismatch(String),

    #[error("bad tail window: tail_start {tail_start}, n_max {n_max}")]
    BadWindow { tail_start: usize, n_max: usize },

    #[error("condition violated: {0}")]
    ConditionViolated(String),

    #[error("unknown check: {0}")]
    UnknownCheck(String),

    #[error("invalid sweep: {0}")]
    BadSweep(String),
}

pub type Result<T> = std::result::Result<T, Error>;
