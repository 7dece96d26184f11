//! Special functions behind the κ-μ distribution and the outage series.
//!
//! | Function | Description |
//! |----------|-------------|
//! | [`log_gamma`] | ln Γ(a) for a > 0 |
//! | [`reg_lower_gamma`] | P(a, x) = γ(a, x)/Γ(a) |
//! | [`reg_upper_gamma`] | Q(a, x) = 1 − P(a, x) |
//! | [`bessel_i`] / [`ln_bessel_i`] | modified Bessel I_ν(x), real ν ≥ 0 |
//! | [`ln_hyp0f1`] | ln ₀F₁(; b; c), the positive series inside I_ν |
//! | [`marcum_q`] | generalized Marcum Q_μ(a, b), real μ > 0 |
//!
//! Everything is pure and reentrant.

mod bessel;
mod gamma;
mod marcum;

pub(crate) use bessel::ln_hyp0f1_unchecked;
pub use bessel::{bessel_i, ln_bessel_i, ln_hyp0f1};
pub(crate) use gamma::ln_gamma_unchecked;
pub use gamma::{
    ln_poisson_pmf, log_gamma, reg_gamma_pair, reg_lower_gamma, reg_upper_gamma, GammaPair,
};
pub(crate) use marcum::poisson_gamma_mixture;
pub use marcum::{marcum_q, marcum_q_pair, MarcumQ};

use crate::error::{Error, Result};

/// Truncation policy for the infinite series evaluated in this crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyBudget {
    rel_tol: f64,
    max_terms: usize,
}

impl AccuracyBudget {
    pub const MIN_TERMS: usize = 16;
    pub const MAX_REL_TOL: f64 = 1e-3;

    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= Self::MAX_REL_TOL) {
            return Err(Error::invalid(
                "rel_tol",
                format!("must lie in (0, {:e}], got {rel_tol:e}", Self::MAX_REL_TOL),
            ));
        }
        if max_terms < Self::MIN_TERMS {
            return Err(Error::invalid(
                "max_terms",
                format!("must be at least {}, got {max_terms}", Self::MIN_TERMS),
            ));
        }
        Ok(AccuracyBudget { rel_tol, max_terms })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for AccuracyBudget {
    fn default() -> Self {
        AccuracyBudget {
            rel_tol: 1e-10,
            max_terms: 10_000,
        }
    }
}
