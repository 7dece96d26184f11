//! Secrecy outage analysis for a SWIPT downlink with transmit antenna
//! selection, an MRC legitimate receiver, and `N` cooperating on-off
//! power-splitting eavesdroppers over κ-μ fading.
//!
//! The crate is organized bottom-up:
//!
//! - [`specfun`]: log-gamma, regularized incomplete gamma, modified Bessel
//!   `I_ν`, and the generalized Marcum-Q function of real order.
//! - [`quadrature`]: adaptive Gauss-Kronrod integration with error estimates.
//! - [`fading`]: the κ-μ SNR distribution (pdf, cdf, MRC composition, sampler).
//! - [`secrecy`]: scenario model and the analytical outage / throughput
//!   evaluators.
//! - [`montecarlo`]: seeded, chunk-parallel simulation of the same events.
//!
//! ```
//! use swipt_secrecy::secrecy::{secrecy_outage, Method, NumericsConfig, SystemConfig};
//!
//! let config = SystemConfig::default();
//! let result = secrecy_outage(&config, &NumericsConfig::default(), Method::Quadrature).unwrap();
//! assert!(result.p_out > 0.0 && result.p_out < 1.0);
//! ```

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fading;
pub mod montecarlo;
pub mod quadrature;
pub mod secrecy;
pub mod specfun;

pub use error::{Error, Result};
pub use fading::KappaMuParams;
pub use montecarlo::McEstimate;
pub use secrecy::{MeanInterpretation, Method, NumericsConfig, OutageResult, SystemConfig};
pub use specfun::AccuracyBudget;

/// Converts a decibel value to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to decibels.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
