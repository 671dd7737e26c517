//! The `.cdga` structure-equation format: parsing with positioned
//! diagnostics, and a canonical pretty-printer that re-parses to the same
//! presentation.

mod parse;
mod pretty;

use std::fmt;

use serde::Serialize;

use crate::cdga::Presentation;
use crate::gcs::GcsData;
use crate::scalars::CScalar;

pub use parse::parse;
pub use pretty::{format_coefficient, format_form, pretty, pretty_presentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub message: String,
    pub suggestion: Option<String>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.line, self.column, self.message)?;
        if let Some(s) = &self.suggestion {
            write!(f, " (help: {s})")?;
        }
        Ok(())
    }
}

/// A parsed file: the algebra and any structures declared with it.
#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub presentation: Presentation<CScalar>,
    pub structures: Vec<GcsData<CScalar>>,
}

#[derive(Clone, Debug)]
pub struct Parsed {
    /// `None` when any error was reported.
    pub document: Option<Document>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Parsed {
    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.severity == Severity::Warning)
    }
}
