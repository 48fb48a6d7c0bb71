use thiserror::Error;

use crate::fincat::Name;
use crate::report::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("unknown object `{0}`")]
    UnknownObject(Name),

    #[error("unknown morphism `{0}`")]
    UnknownMorphism(Name),

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("invalid input ({what}): {report}")]
    Invalid {
        what: String,
        report: ValidationReport,
    },

    #[error("bound exceeded: {bound} = {actual} exceeds limit {limit}")]
    BoundExceeded {
        bound: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("retry budget exhausted while generating {what} after {attempts} attempts")]
    RetryBudgetExhausted { what: &'static str, attempts: usize },

    #[error("witness undefined: {0}")]
    Witness(String),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::BoundExceeded { .. } | Error::RetryBudgetExhausted { .. }
        )
    }

    pub(crate) fn invalid(what: impl Into<String>, report: ValidationReport) -> Self {
        Error::Invalid {
            what: what.into(),
            report,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
