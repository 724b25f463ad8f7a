use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("acceleration parameter must be positive and finite, got {0}")]
    InvalidOmega(f64),

    #[error("invalid truncation policy: epsilon {epsilon}, hard cap {hard_cap}")]
    InvalidPolicy { epsilon: f64, hard_cap: usize },

    #[error(
        "tail target {target:e} unreachable within hard cap {hard_cap} (achievable tail {achievable:e})"
    )]
    Truncation {
        target: f64,
        hard_cap: usize,
        achievable: f64,
    },

    #[error("probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),

    #[error("duplicate factor name `{0}`")]
    DuplicateFactor(String),

    #[error("unknown factor `{0}`")]
    UnknownFactor(String),

    #[error("factor dimensions multiply to {product}, operator dimension is {dim}")]
    LayoutMismatch { product: usize, dim: usize },

    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace {0} deviates from 1 beyond tolerance {1:e}")]
    NonUnitTrace(f64, f64),

    #[error("operator is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("factor `{factor}` has dimension {dim}, expected a qubit")]
    NotAQubit { factor: String, dim: usize },

    #[error("not an X-shaped state: entry ({row},{col}) has magnitude {value:e}")]
    NotXState { row: usize, col: usize, value: f64 },

    #[error("dense expansion dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("blocks do not share a common helicity shape")]
    InhomogeneousBlocks,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}
