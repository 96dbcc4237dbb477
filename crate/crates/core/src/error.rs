use thiserror::Error;

use crate::graded::Parity;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("duplicate basis name `{0}`")]
    DuplicateBasisName(String),

    #[error("entry ({row}, {col}) breaks homogeneity of a map of parity {parity}")]
    NotHomogeneous {
        row: usize,
        col: usize,
        parity: Parity,
    },

    #[error("vector is not homogeneous")]
    InhomogeneousVector,

    #[error("expected an {expected} map, found an {found} one")]
    ParityMismatch { expected: Parity, found: Parity },

    #[error("differential does not square to zero")]
    DifferentialNotSquareZero,

    #[error("bilinear form: {0}")]
    InvalidForm(String),

    #[error("slot {slot} with arity {arity} does not fit {len} arguments")]
    SlotOutOfRange {
        slot: usize,
        arity: usize,
        len: usize,
    },

    #[error("arity {arity} outside the supported range {min}..={max}")]
    ArityOutOfRange {
        arity: usize,
        min: usize,
        max: usize,
    },

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("Hodge data is not harmonious (d t != 0)")]
    NotHarmonious,

    #[error("form restricted to the chosen homology representatives is degenerate")]
    DegenerateHarmonicForm,

    #[error("auxiliary form system is inconsistent; the form is probably not compatible with d")]
    AuxiliarySystemInconsistent,

    #[error("the radical of the form has no d-stable complement: {0}")]
    NoDgComplement(String),

    #[error("{0} is not invertible")]
    NotInvertible(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{field}: {message}")]
    Parse { field: String, message: String },
}
