use std::fmt;

use thiserror::Error;

use crate::weil_algebra::ValidationReport;

/// Position-carrying parse failure for polynomial and rational text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at offset {}: expected one of [{}], found {:?}",
            self.offset,
            self.expected.join(", "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("coefficient ring mismatch")]
    RingMismatch,

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("no assignment for variable x{0}")]
    MissingAssignment(usize),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid Weil algebra: {0}")]
    Validation(ValidationReport),

    #[error("Poisson structure fails Jacobi: {0}")]
    InvalidPoisson(String),

    #[error("arity mismatch: expected {expected} arguments, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("not an algebra homomorphism: fails on basis pair ({0}, {1})")]
    NotAHomomorphism(usize, usize),

    #[error("degenerate Frobenius form; kernel vector [{}]", .0.join(", "))]
    DegenerateForm(Vec<String>),

    #[error("structure is inhomogeneous (coefficient degrees {min}..={max}); use the capped variant")]
    InhomogeneousStructure { min: usize, max: usize },

    #[error("cap {cap} is below the coefficient degree {degree} of the structure")]
    CapBelowDegree { cap: usize, degree: usize },

    #[error("missing ingredient: {0}")]
    MissingIngredient(String),

    #[error("unknown claim: {0}")]
    UnknownClaim(String),

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
