use exactlin::ShapeError;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("inconsistent entries for triple ({i},{j},{k}): {reason}")]
    InconsistentTriple {
        i: usize,
        j: usize,
        k: usize,
        reason: String,
    },
    #[error("dimension {dim} exceeds the limit {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("subspace is not an ideal")]
    NotAnIdeal,
    #[error("{0} does not satisfy its axioms")]
    NotVerified(&'static str),
    #[error("unknown property {0:?}")]
    UnknownProperty(String),
    #[error("generator gave up after {attempts} attempts without an accepted algebra")]
    GeneratorExhausted { attempts: usize },
    /// A statement that holds on paper failed on a concrete input. Carries
    /// enough detail to reproduce it.
    #[error("discrepancy: {0}")]
    Discrepancy(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        if e.classify() == serde_json::error::Category::Data {
            return Error::Schema(e.to_string());
        }
        Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
