use std::fmt;

use thiserror::Error;

/// Stable error classes, as printed in reports and matched by the corpus
/// manifest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorClass {
    Syntax,
    Scope,
    TypeMismatch,
    BoundaryMismatch,
    ShapeMembership,
    NonInclusion,
    IncompatibleCases,
    CaseCoverage,
    NotSynthesizable,
    EntailmentFailure,
    Resource,
    OracleDivergence,
    Duplicate,
}

impl ErrorClass {
    pub const ALL: [ErrorClass; 13] = [
        ErrorClass::Syntax,
        ErrorClass::Scope,
        ErrorClass::TypeMismatch,
        ErrorClass::BoundaryMismatch,
        ErrorClass::ShapeMembership,
        ErrorClass::NonInclusion,
        ErrorClass::IncompatibleCases,
        ErrorClass::CaseCoverage,
        ErrorClass::NotSynthesizable,
        ErrorClass::EntailmentFailure,
        ErrorClass::Resource,
        ErrorClass::OracleDivergence,
        ErrorClass::Duplicate,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorClass::Syntax => "syntax-error",
            ErrorClass::Scope => "scope-error",
            ErrorClass::TypeMismatch => "type-mismatch",
            ErrorClass::BoundaryMismatch => "boundary-mismatch",
            ErrorClass::ShapeMembership => "shape-membership",
            ErrorClass::NonInclusion => "non-inclusion",
            ErrorClass::IncompatibleCases => "incompatible-cases",
            ErrorClass::CaseCoverage => "case-coverage",
            ErrorClass::NotSynthesizable => "not-synthesizable",
            ErrorClass::EntailmentFailure => "entailment-failure",
            ErrorClass::Resource => "resource",
            ErrorClass::OracleDivergence => "oracle-divergence",
            ErrorClass::Duplicate => "duplicate",
        }
    }

    pub fn parse(s: &str) -> Option<ErrorClass> {
        ErrorClass::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{class}: {message}")]
pub struct KernelError {
    pub class: ErrorClass,
    pub message: String,
    /// A tope countermodel, already rendered with source names.
    pub countermodel: Option<String>,
}

impl KernelError {
    pub fn new(class: ErrorClass, message: impl Into<String>) -> KernelError {
        KernelError { class, message: message.into(), countermodel: None }
    }

    pub fn with_countermodel(mut self, cm: Option<String>) -> KernelError {
        self.countermodel = cm;
        self
    }
}

pub type KResult<T> = Result<T, KernelError>;
