use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different fields ({left} vs {right})")]
    FieldMismatch { left: String, right: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("{n}! is not invertible in a field of characteristic {characteristic}")]
    CharacteristicDividesFactorial { n: usize, characteristic: u64 },

    #[error("the signed identity needs 2 to be invertible; field has characteristic 2")]
    CharacteristicTwo,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arity mismatch: expected {expected} arguments, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("polynomial is not homogeneous of degree {degree}")]
    NotHomogeneous { degree: usize },

    #[error("pair partitions need an even number of elements, got {0}")]
    OddOrder(usize),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("covariance matrix is not positive semidefinite")]
    NotPositiveSemidefinite,

    #[error("covariance matrix is not symmetric")]
    NotSymmetric,

    #[error("floating-point scalars are only valid for Monte Carlo estimates")]
    FloatNotAllowed,

    #[error("{0} is not a supported prime modulus")]
    InvalidModulus(u64),

    #[error("{what} = {value} exceeds the bound {bound}")]
    OutOfBounds { what: &'static str, value: usize, bound: usize },

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
