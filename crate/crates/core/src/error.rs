use std::fmt;

use thiserror::Error;

use crate::invariants::InvariantSignature;

/// A scalar string that does not parse in the requested field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseScalarError {
    input: String,
    reason: String,
}

impl ParseScalarError {
    pub fn new(input: &str, reason: &str) -> Self {
        Self { input: input.to_owned(), reason: reason.to_owned() }
    }

    pub fn reason(&self) -> &str {
        &self.reason
    }
}

impl fmt::Display for ParseScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid scalar `{}`: {}", self.input, self.reason)
    }
}

impl std::error::Error for ParseScalarError {}

/// A signature that matches no row of the class table.
///
/// Either the implementation is wrong or the table is incomplete; both are
/// worth a bug report, so the offending tensor travels with the error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationGap {
    pub family: String,
    pub signature: InvariantSignature,
    /// The tensor as a JSON tensor document.
    pub document: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("arity error: expected a {expected}-subsystem tensor, got {got} subsystems")]
    Arity { expected: usize, got: usize },
    #[error("basis error: {0}")]
    Basis(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported shape {0}; supported families are (d1,d2), (2,2,d) and (2,3,d) with d >= 2")]
    UnsupportedFamily(String),
    #[error("unknown class label `{0}`")]
    UnknownLabel(String),
    #[error("class {label} is discarded at d = {d}: {reason}")]
    Discarded { label: String, d: usize, reason: String },
    #[error(
        "classification gap in family {}: signature {} matches no class; tensor: {}",
        .0.family, .0.signature, .0.document
    )]
    ClassificationGap(Box<ClassificationGap>),
    #[error("internal consistency violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Scalar(#[from] ParseScalarError),
    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
