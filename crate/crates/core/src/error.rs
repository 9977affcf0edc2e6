use thiserror::Error;

/// Errors raised by the algebra kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("an algebra needs at least one generator")]
    NoGenerators,
    #[error("truncation cap must be at least 1")]
    InvalidCap,
    #[error("generator index {index} out of range for {generators} generators")]
    GeneratorOutOfRange { index: usize, generators: usize },
    #[error("relation must be a nonzero homogeneous quadratic, got {0}")]
    InvalidRelation(String),
    #[error("operands belong to different algebra signatures")]
    SignatureMismatch,
    #[error("element {0} has zero constant term and is not invertible")]
    NotInvertible(String),
    #[error("monomial {0} is not a basis monomial of this algebra")]
    MonomialOutsideBasis(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors must have at least one coordinate")]
    EmptyVector,
    #[error("signature too small: {what} needs {required} generators, {available} available")]
    SignatureTooSmall {
        what: String,
        required: usize,
        available: usize,
    },
    #[error("map is inconsistent with its normal form: {0}")]
    InconsistentMap(String),
    #[error("extraction requires a base point with constant coordinates")]
    NonConstantBase,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("affine weights sum to {0}, expected 1")]
    WeightSum(String),
    #[error("connection symbol is not symmetric")]
    NotSymmetric,
    #[error("not an i-group law: component {component} {detail}")]
    NotAnIGroupLaw { component: String, detail: String },
    #[error("matrix is singular")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
