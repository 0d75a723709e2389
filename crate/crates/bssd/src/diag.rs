//! Load-time diagnostics.

use std::fmt;

use serde::Serialize;

use crate::osm::ElementRef;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl Severity {
    pub fn token(&self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// One problem discovered while loading or editing a map. `code` is a stable
/// machine-readable identifier; `subjects` name the elements involved.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub subjects: Vec<ElementRef>,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: &'static str, subjects: Vec<ElementRef>, message: String) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            code,
            subjects,
            message,
        }
    }

    pub fn warning(code: &'static str, subjects: Vec<ElementRef>, message: String) -> Diagnostic {
        Diagnostic {
            severity: Severity::Warning,
            code,
            subjects,
            message,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let subjects: Vec<String> = self.subjects.iter().map(|s| s.to_string()).collect();
        write!(
            f,
            "{} {} [{}]: {}",
            self.severity,
            self.code,
            subjects.join(", "),
            self.message
        )
    }
}
