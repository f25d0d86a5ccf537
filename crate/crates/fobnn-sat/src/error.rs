//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Syntax error in the native text format or in constraint text.
    #[error("parse error at line {line}, column {col}: {message}")]
    Parse { line: usize, col: usize, message: String },

    /// Malformed or unsupported CoreSBML input.
    #[error("coresbml error: {0}")]
    CoreSbml(String),

    /// A model failed semantic validation.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// A name was used that the model does not declare.
    #[error("unknown species '{0}'")]
    UnknownSpecies(String),

    /// The formula evaluator met a variable with no binding.
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),

    /// A size guard refused an analysis; pass the corresponding force
    /// option to override where one exists.
    #[error("{what}: {actual} exceeds the size guard limit of {limit}")]
    SizeGuard { what: &'static str, limit: usize, actual: usize },

    /// The SAT backend failed or was misconfigured.
    #[error("backend error: {0}")]
    Backend(String),

    /// An internal invariant was violated; this is a bug.
    #[error("internal error: {0}")]
    Internal(String),

    /// A state given on the command line could not be interpreted.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Graph operation applied to an unsuitable graph.
    #[error("graph error: {0}")]
    Graph(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(line: usize, col: usize, message: impl Into<String>) -> Error {
        Error::Parse { line, col, message: message.into() }
    }

    /// True for errors raised by analysis size guards, as opposed to bad
    /// input.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::SizeGuard { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
