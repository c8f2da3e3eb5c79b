use std::io;

use thiserror::Error;

use crate::catalog::FunctionId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown function id {0} (valid ids are 0..=36)")]
    UnknownFunction(usize),

    #[error("dimension too small for {function}: got {dim}, need at least {min}")]
    DimensionTooSmall {
        function: FunctionId,
        dim: usize,
        min: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite input value")]
    NonFiniteInput,

    #[error("empty input")]
    EmptyInput,

    /// A column collapsed during orthonormalization; draw a new matrix.
    #[error("matrix is numerically rank deficient")]
    RankDeficient,

    #[error("function {0} is disabled for this engine's dimension")]
    DisabledFunction(FunctionId),

    #[error("batch of {count} points exceeds max concurrency {max}")]
    BatchTooLarge { count: usize, max: usize },

    #[error("engine used after dispose")]
    UseAfterDispose,

    #[error("{0} cannot be evaluated at dimension 2")]
    UnsupportedAtDim2(FunctionId),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("corrupt instance: {0}")]
    CorruptInstance(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
