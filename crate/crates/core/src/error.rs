//! Error types shared across the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("permutation length {perm} does not match degree list length {degrees}")]
    LengthMismatch { perm: usize, degrees: usize },

    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),

    #[error("shift mismatch: expected [{expected}], got [{got}]")]
    ShiftMismatch { expected: i64, got: i64 },

    #[error("operands use different graded bases")]
    BasisMismatch,

    #[error("duplicate basis id `{0}`")]
    DuplicateId(String),

    #[error("unknown basis id `{0}`")]
    UnknownId(String),

    #[error("inhomogeneous table entry at input {input}: expected output degree {expected}, found {found}")]
    InhomogeneousEntry {
        input: String,
        expected: i64,
        found: i64,
    },

    #[error("declared degrees differ: {0} vs {1}")]
    DegreeMismatch(i64, i64),

    #[error("operand is not degree-homogeneous")]
    NotHomogeneous,

    #[error("declared degree must be 1, found {0}")]
    NotDegreeOne(i64),

    #[error("curved input: the series carries a lambda^0 coefficient")]
    CurvedInput,

    #[error("series coefficient at lambda^{order} is not homogeneous of degree 2 over the desuspended basis")]
    BadSeriesDegree { order: usize },

    #[error("algebra is not certified; run the higher-Jacobi check first")]
    NotCertified,

    #[error("operation requires a classical algebra (single binary bracket, basis in degree zero)")]
    NotClassical,

    #[error("missing r-matrix: the input file declares no series coefficients")]
    MissingRMatrix,
}
