use thiserror::Error;

use crate::rat::{QVec, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed rational {0:?}")]
    MalformedRational(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("generators do not span a full-rank lattice")]
    RankDeficient,

    #[error("lattice coordinates too large for machine integers")]
    Overflow,

    #[error("vector {0} is not in the lattice")]
    NotInLattice(QVec),

    #[error("zero vector has no primitive scale")]
    ZeroVector,

    #[error("vector {vector} is not primitive (primitive scale {scale})")]
    NotPrimitive { vector: QVec, scale: u64 },

    #[error("vector {0} lies outside the positive orthant")]
    OutsideCone(QVec),

    #[error("boundary coefficient {0} outside [0,1]")]
    BoundaryOutOfRange(Rat),

    #[error("coordinate {0} outside (0,1]")]
    CoordinateOutOfRange(Rat),

    #[error("invalid face: {0}")]
    InvalidFace(String),

    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("adjunction needs boundary coefficient 1 on divisor {index}, found {found}")]
    AdjunctionCoefficient { index: usize, found: Rat },

    #[error("exponent {0} is not in the dual lattice")]
    ExponentNotInDual(QVec),

    #[error("exponent {0} has a negative entry")]
    NegativeExponent(QVec),

    #[error("zero exponent (constant term) is not in the maximal ideal")]
    ZeroExponent,

    #[error("empty exponent list")]
    NoExponents,

    #[error("closed form needs the lattice Z^d")]
    NotSmoothLattice,

    #[error("invalid valuation/divisor combination: {0}")]
    InvalidCombo(String),

    #[error("state is already flat at the fixed point")]
    AlreadyFlat,

    #[error("state is not log canonical")]
    NotLogCanonical,

    #[error("no log canonical center: every combination has positive log discrepancy")]
    NoZeroCenter,

    #[error("flat structure not reached within {0} steps")]
    StepBoundExceeded(usize),

    #[error("row cap {cap} exceeded ({rows} rows)")]
    RowCapExceeded { cap: usize, rows: usize },

    #[error("invalid document: {0}")]
    Document(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
