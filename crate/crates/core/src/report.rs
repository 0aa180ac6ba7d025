//! Validation reports shared by every checker in the crate.
//!
//! Checkers never fail on bad input data; they collect [`Finding`]s. A report
//! is `ok` when it holds no finding of [`Severity::Error`].

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    /// Informational; does not make the report fail.
    Note,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingKind {
    // Presented categories and functors.
    UnknownObject,
    UnknownGenerator,
    UnmappedObject,
    UnmappedGenerator,
    EndpointViolation,
    EquationNotPreserved,
    // Ologs.
    MissingLabel,
    UnknownLabel,
    BadNounPhrase,
    AspectAuthors,
    FactAuthors,
    FactNotProved,
    // Instances.
    UnknownTokenSet,
    UnknownFunction,
    Totality,
    /// A function maps a token that is not declared in its source type.
    UndeclaredToken,
    Range,
    FactViolation,
    // Mappings.
    MissingComponent,
    ComponentAuthors,
    SquareAuthors,
    EmptySquareAuthors,
    NotAnInclusion,
    Naturality,
    Unendorsed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub severity: Severity,
    pub kind: FindingKind,
    /// Identifier of the offending item (object, generator, equation, token...).
    pub subject: String,
    pub message: String,
}

impl Finding {
    pub fn error(
        kind: FindingKind,
        subject: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Finding {
            severity: Severity::Error,
            kind,
            subject: subject.into(),
            message: message.into(),
        }
    }

    pub fn note(kind: FindingKind, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Finding {
            severity: Severity::Note,
            kind,
            subject: subject.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Note => "note",
        };
        write!(f, "{sev}: {}: {}", self.subject, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, finding: Finding) {
        self.findings.push(finding);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.findings.extend(other.findings);
    }

    /// True when there are no error findings (notes are allowed).
    pub fn is_ok(&self) -> bool {
        self.errors().next().is_none()
    }

    /// True when there are no findings at all.
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
    }

    pub fn count(&self, kind: FindingKind) -> usize {
        self.findings.iter().filter(|f| f.kind == kind).count()
    }

    pub fn len(&self) -> usize {
        self.findings.len()
    }
}

impl FromIterator<Finding> for ValidationReport {
    fn from_iter<I: IntoIterator<Item = Finding>>(iter: I) -> Self {
        ValidationReport {
            findings: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for finding in &self.findings {
            writeln!(f, "{finding}")?;
        }
        Ok(())
    }
}
