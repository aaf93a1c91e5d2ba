use thiserror::Error;

use crate::field::FieldSpec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: FieldSpec, found: FieldSpec },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("modulus {0} is not a supported prime")]
    NotPrime(u64),

    #[error("{value} is not an element of {field}")]
    NotInField { value: String, field: FieldSpec },

    #[error("invalid scalar literal `{0}`")]
    InvalidScalar(String),

    #[error("products {left}*{right} and {right}*{left} disagree")]
    NotCommutative { left: String, right: String },

    #[error("{name} requires characteristic not in {excluded:?}, got {characteristic}")]
    Characteristic {
        name: String,
        characteristic: u64,
        excluded: Vec<u64>,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("axis is not an idempotent")]
    NotIdempotent,

    #[error("the zero vector cannot serve as an axis")]
    ZeroAxis,

    #[error("decomposition is incomplete: the law's eigenspaces do not span the algebra")]
    IncompleteDecomposition,

    #[error("family {family} needs {required} words, cap is {cap}")]
    CapExceeded {
        family: String,
        required: u128,
        cap: usize,
    },

    #[error("{what}: size {size} exceeds bound {bound}")]
    SizeBound {
        what: String,
        size: u128,
        bound: u128,
    },

    #[error("map is not invertible: {0}")]
    NotInvertible(String),

    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
