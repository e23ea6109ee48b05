//! Serialization: event logs (lines, CSV, XES subset), constraint text,
//! Petri-net text and a PNML subset, automaton text, frame manifests, and
//! the shared position-bearing parse error.
//!
//! All writers produce canonical, sorted output so diffs are stable;
//! parsers reject malformed input with a line-bearing error rather than
//! returning partial results.

pub mod declare_text;
pub mod dfa_text;
pub mod log_files;
pub mod manifest;
pub mod net_text;
pub mod pnml;

use std::fmt;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("unsupported file extension {0:?} (expected one of {1})")]
    UnknownExtension(String, &'static str),
}

impl FormatError {
    pub(crate) fn io(path: &Path, err: std::io::Error) -> FormatError {
        FormatError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    pub(crate) fn parse(path: &Path, err: ParseError) -> FormatError {
        FormatError::Parse {
            path: path.display().to_string(),
            source: err,
        }
    }
}

/// Event-log file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogFormat {
    /// one trace per line, comma-separated activities
    Lines,
    /// header `case_id,activity`, traces grouped by case id
    Csv,
    /// XES subset: `<trace>` elements, activity from `concept:name`
    Xes,
}

impl LogFormat {
    pub fn from_path(path: &Path) -> Result<LogFormat, FormatError> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Ok(LogFormat::Csv),
            Some("xes") => Ok(LogFormat::Xes),
            Some(_) | None => Ok(LogFormat::Lines),
        }
    }
}
