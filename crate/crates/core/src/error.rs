use thiserror::Error;

use crate::context::Generation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{kind} index {index} out of range (size {size})")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        size: usize,
    },

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    /// A set or concept built against one context generation was used with another.
    #[error("stale operand: built for generation {found}, used with generation {expected}")]
    GenerationMismatch {
        expected: Generation,
        found: Generation,
    },

    #[error("duplicate {kind} identifier `{name}`")]
    DuplicateIdentifier { kind: &'static str, name: String },

    #[error("invalid {kind} identifier {name:?}")]
    InvalidIdentifier { kind: &'static str, name: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("data error at row {row}, column `{column}`: {message}")]
    Data {
        row: usize,
        column: String,
        message: String,
    },

    #[error("batch rejected: {0}")]
    BatchRejected(String),

    #[error("corrupt state file at byte {offset}: {message}")]
    CorruptState { offset: usize, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
