//! File formats: disclosure-record CSV, JSON model files, DOT and traces.
//!
//! Every writer is byte-deterministic for a fixed input.

mod dot;
mod model_file;
mod records;
mod trace;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::model::ModelError;
use crate::query::ParseError;
use crate::semantics::SemanticsError;

pub use dot::{automaton_dot, export_dot};
pub use model_file::{load_model, model_from_str, model_to_string, save_model, MODEL_FORMAT, MODEL_VERSION};
pub use records::{load_records, parse_records, RECORD_HEADER};
pub use trace::{read_trace, trace_from_json, trace_to_json, trace_to_text, write_trace, TraceFormat, TRACE_FORMAT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },
    #[error("line {line}: {message}")]
    Record { line: u64, message: String },
    #[error("record header must be `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("malformed document: {0}")]
    Json(String),
    #[error("unsupported {what} version {found} (expected {expected})")]
    Version { what: &'static str, found: u32, expected: u32 },
    #[error("not a {expected} document (format `{found}`)")]
    Format { expected: &'static str, found: String },
    #[error("process `{process}`: {context}: {error}")]
    Expression { process: String, context: String, error: ParseError },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

pub(crate) fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| file_error(path, e))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), IoError> {
    std::fs::write(path, contents).map_err(|e| file_error(path, e))
}

pub(crate) fn file_error(path: &Path, e: std::io::Error) -> IoError {
    IoError::File { path: path.to_path_buf(), message: e.to_string() }
}
