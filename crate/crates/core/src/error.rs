use thiserror::Error;

use crate::field::FieldError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("cannot compose: lower row has {lower} points, upper row has {upper}")]
    Arity { lower: usize, upper: usize },
    #[error("cannot rotate: {0} row is empty")]
    Rotation(&'static str),
    #[error("{what} of size {size} exceeds the configured cap {cap}")]
    SizeCap {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("grade mismatch in {op}: ({}, {}) vs ({}, {})", .left.0, .left.1, .right.0, .right.1)]
    Grade {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(u64, u64),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("matrix shape mismatch in {op}: {left:?} vs {right:?}")]
    MatrixShape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("grade ({}, {}) exceeds the closure bound {bound}", .grade.0, .grade.1)]
    Bound { grade: (usize, usize), bound: usize },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
