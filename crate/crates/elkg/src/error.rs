//! Crate-wide error and result types.

use thiserror::Error;

/// Result type used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid IRI: {0}")]
    InvalidIri(String),

    #[error("IRI collision: {raw_a:?} and {raw_b:?} both map to local name {local:?}")]
    IriCollision {
        raw_a: String,
        raw_b: String,
        local: String,
    },

    #[error("turtle syntax error at {line}:{column}: {message}")]
    TurtleSyntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported turtle construct at {line}:{column}: {construct}")]
    TurtleUnsupported {
        line: usize,
        column: usize,
        construct: String,
    },

    #[error("XES error: {0}")]
    Xes(String),

    #[error("XML syntax error: {0}")]
    Xml(#[from] quick_xml::Error),

    #[error("OCEL error: {0}")]
    Ocel(String),

    #[error("JSON syntax error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("timestamp {value:?} could not be parsed: {message}")]
    Timestamp { value: String, message: String },

    #[error("perspective definition error at {path}: {message}")]
    Perspective { path: String, message: String },

    #[error("unknown object id {0:?}")]
    UnknownObject(String),

    #[error("unknown trace id {0:?}")]
    UnknownTrace(String),

    #[error("trace structure error for {trace}: {message}")]
    TraceStructure { trace: String, message: String },

    #[error("query syntax error at {line}:{column}: {message}")]
    QuerySyntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("query validation error in clause {clause}: {message}")]
    QueryValidation { clause: usize, message: String },

    #[error("constraint error: {0}")]
    Constraint(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}
