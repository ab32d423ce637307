use thiserror::Error;

use crate::poly::Monomial;

/// Errors raised by polynomial construction and manipulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polynomial is not multihomogeneous: terms {first:?} and {second:?} have different group degrees")]
    NotMultihomogeneous { first: Monomial, second: Monomial },
    #[error("malformed variable grouping: {0}")]
    MalformedGrouping(String),
    #[error("malformed chart form: {0}")]
    MalformedChart(String),
    #[error("cannot randomize {have} polynomials down to {want}")]
    TooFewPolynomials { have: usize, want: usize },
    #[error("polynomials belong to different variable structures")]
    StructureMismatch,
}

/// Errors raised while reading system files and witness archives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undeclared identifier `{name}` at {line}:{column}")]
    Undeclared {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("empty variable group at {line}:{column}")]
    EmptyGroup { line: usize, column: usize },
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("unsupported archive version `{0}`")]
    Version(String),
    #[error("corrupted archive record at line {line}: {message}")]
    Corrupted { line: usize, message: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Structural errors from homotopy construction and witness bookkeeping.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("homotopy is not square: {equations} equations in {variables} variables")]
    NotSquare { equations: usize, variables: usize },
    #[error("start and target equation {index} differ in shape or multidegree")]
    MovingMismatch { index: usize },
    #[error("slice type {e:?} is invalid for dimensions {dims:?}")]
    BadSliceType { e: Vec<usize>, dims: Vec<usize> },
    #[error("slice types differ: {0:?} vs {1:?}")]
    SliceTypeMismatch(Vec<usize>, Vec<usize>),
    #[error("tracked point count changed from {before} to {after}")]
    PointCountChanged { before: usize, after: usize },
    #[error("{failed} of {total} paths failed")]
    PathFailures { failed: usize, total: usize },
    #[error("missing witness set for slice type {0:?}")]
    MissingWitnessSet(Vec<usize>),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
