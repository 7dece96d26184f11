use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {func}: {reason}")]
    Domain { func: &'static str, reason: String },

    /// A configuration field violates its invariant.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A series hit its term cap before the truncation bound met the tolerance.
    #[error(
        "series in {func} did not converge after {terms} terms \
         (partial sum {partial:e}, remaining-term bound {bound:e})"
    )]
    Convergence {
        func: &'static str,
        terms: usize,
        partial: f64,
        bound: f64,
    },

    /// Adaptive quadrature ran out of subdivisions.
    #[error(
        "quadrature did not converge after {intervals} intervals \
         (estimate {value:e}, error estimate {error:e})"
    )]
    Quadrature {
        value: f64,
        error: f64,
        intervals: usize,
    },
}

impl Error {
    pub(crate) fn domain(func: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            func,
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
