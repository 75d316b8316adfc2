use std::path::PathBuf;

use thiserror::Error;

use crate::models::Violation;
use crate::syntax::{Agent, ParseError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("atom `{0}` has no valuation in this model")]
    UnknownAtom(String),

    #[error("agent {0} has no epistemic state function in this model")]
    UnknownAgent(Agent),

    #[error("classical models are single-agent; found K{{{0}}}")]
    UnsupportedAgent(Agent),

    #[error("a model needs between 1 and {cap} worlds, got {worlds}")]
    WorldCount { worlds: usize, cap: usize },

    #[error("enumeration bound of {requested} worlds exceeds the cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },

    #[error("{what} mentions world {world}, but the model has only {worlds} worlds")]
    OutOfRange { what: String, world: usize, worlds: usize },

    #[error("{what} has no entry for world {world}")]
    MissingWorld { what: String, world: usize },

    #[error("invalid model: {0}")]
    InvalidModel(Violation),

    #[error("model kind mismatch: expected a {expected} model")]
    ModelKind { expected: &'static str },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },

    #[error("invalid claim: {0}")]
    Claim(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let message = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
        Error::Json { line: e.line(), column: e.column(), message }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
