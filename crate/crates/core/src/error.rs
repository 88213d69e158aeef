use thiserror::Error;

use crate::text::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("coordinate {index} is zero; points must lie on the torus")]
    ZeroCoordinate { index: usize },

    #[error("integer overflow in exponent arithmetic")]
    Overflow,

    #[error("no lattice coordinates supplied for exponent {0}")]
    MissingCoordinate(String),

    #[error("{0} is not in the lattice")]
    NotInLattice(String),

    #[error("lattice has rank {0}, expected rank 1")]
    RankNotOne(usize),

    #[error("exponent lattice has full rank {0}; no reduction exists")]
    FullRank(usize),

    #[error("every p_i is constant; there is nothing to reduce")]
    ConstantField,

    #[error("matrix must be {dim}x{dim}")]
    MatrixShape { dim: usize },

    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i128),

    #[error("field is not complete")]
    NotComplete,

    #[error("canonical form requires dimension 2, got {0}")]
    NotPlanar(usize),

    #[error("reduction chain of length {0} has no elementary closed-form flow")]
    ChainTooDeep(usize),

    #[error("tolerances must be positive and finite")]
    InvalidTolerance,

    #[error("division by zero")]
    DivisionByZero,

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("malformed document: {0}")]
    Document(String),
}
