use thiserror::Error;

pub type Result<T> = std::result::Result<T, FrameError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("matrix is not symmetric (asymmetry {asymmetry:.3e})")]
    NonSymmetric { asymmetry: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index-set length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("weight {weight} at index {index} is not strictly positive")]
    NonPositiveWeight { index: usize, weight: f64 },

    #[error("part {index} does not lie in its subspace (residual {residual:.3e})")]
    PartOutsideSubspace { index: usize, residual: f64 },

    #[error("family is not a fusion frame (lower bound {lower:.3e})")]
    NotAFrame { lower: f64 },

    #[error("enlarged family is not a dual (defect {defect:.3e})")]
    DualityLost { defect: f64 },

    #[error("{count} assignments exceed the enumeration cap {cap}")]
    EnumerationTooLarge { count: u128, cap: u64 },

    #[error("family must be 1-uniform, weight {weight} found at index {index}")]
    NonUniformWeights { index: usize, weight: f64 },

    #[error("operator is singular (reduced minimum modulus {gamma:.3e})")]
    SingularOperator { gamma: f64 },

    #[error("operator is numerically zero")]
    ZeroOperator,

    #[error("operator is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("subspaces do not form an orthonormal fusion basis")]
    NotOrthonormalBasis,

    #[error("Friedrichs cosine {c} is not below one")]
    AngleNotLessThanOne { c: f64 },

    #[error("index {index} out of range for {len} members")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid tolerance {name} = {value}")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("frame count must be at least one")]
    NoFrames,
}
