use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the model or formula.
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// A numerical routine did not reach its tolerance or produced a value
    /// that violates a hard bound.
    #[error("numeric failure in {what}: {detail}")]
    Numeric {
        what: &'static str,
        detail: String,
        /// Best available estimate when the routine produced one.
        best_estimate: Option<f64>,
    },

    /// A configuration document failed validation; `field` is the offending path.
    #[error("invalid configuration field `{field}`: {detail}")]
    Config { field: String, detail: String },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn numeric(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Numeric {
            what,
            detail: detail.into(),
            best_estimate: None,
        }
    }

    pub(crate) fn config(field: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            detail: detail.into(),
        }
    }

    /// True for [`Error::Numeric`].
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
