use thiserror::Error;

use crate::systems::Variant;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}` = {value}: {reason}")]
    InvalidParam {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    #[error("variant mismatch: expected {expected}, found {found}")]
    VariantMismatch { expected: String, found: Variant },

    #[error("{0}")]
    InvalidInput(String),

    #[error("implicit midpoint did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("integration failed at t = {t}: {source}")]
    Integration {
        t: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn mismatch(expected: impl Into<String>, found: Variant) -> Self {
        Error::VariantMismatch {
            expected: expected.into(),
            found,
        }
    }

    pub(crate) fn non_finite(context: impl Into<String>) -> Self {
        Error::NonFinite {
            context: context.into(),
        }
    }
}
