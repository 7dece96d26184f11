//! Scenario model and analytical evaluators for the secrecy outage
//! probability, transmission probability and secrecy throughput.
//!
//! Per transmit antenna `l`, the legitimate receiver's composite MRC SNR γ_s
//! is κ-μ with shape Mμ_s; each of the `N` eavesdroppers sees an independent
//! κ-μ SNR with mean ω·γ̄_e. Given γ_s the eavesdroppers are independent, so
//! the per-antenna coverage probability is
//!
//! P_cov = ∫_{2^{R_s}−1}^∞ F_e(γ_th(γ))^N f_s(γ) dγ,
//!
//! and with i.i.d. antennas P_out = (1 − P_cov)^L.

mod channel;
mod outage;
mod series;
mod throughput;

pub use channel::{eaves_power_ratio, gamma_threshold, pathloss};
pub use outage::{
    p_eve_quadrature, p_eve_series, secrecy_outage, Evaluation, OutageResult, TermsUsed,
};
pub use throughput::{secrecy_throughput, transmission_probability, transmission_probability_cdf};

use crate::error::{Error, Result};
use crate::fading::KappaMuParams;
use crate::specfun::AccuracyBudget;

/// How `main_branch.mean_snr` relates to the composite MRC SNR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeanInterpretation {
    /// γ̄_s is the per-branch mean; the composite mean is M·γ̄_s/PL_s.
    #[default]
    PerBranchTimesM,
    /// γ̄_s is already the combiner-output mean; the composite mean is γ̄_s/PL_s.
    CombinerOutput,
}

impl MeanInterpretation {
    pub fn as_str(&self) -> &'static str {
        match self {
            MeanInterpretation::PerBranchTimesM => "per_branch_times_M",
            MeanInterpretation::CombinerOutput => "combiner_output",
        }
    }
}

impl std::str::FromStr for MeanInterpretation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per_branch_times_M" => Ok(MeanInterpretation::PerBranchTimesM),
            "combiner_output" => Ok(MeanInterpretation::CombinerOutput),
            other => Err(Error::invalid(
                "mean_interpretation",
                format!("expected per_branch_times_M or combiner_output, got {other:?}"),
            )),
        }
    }
}

/// Which evaluator produces the eavesdropper/coverage probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Direct adaptive quadrature of the coverage integral. Authoritative.
    #[default]
    Quadrature,
    /// Poisson double series in the eavesdropper and main-link expansions,
    /// each term carrying a one-dimensional integral over γ_s.
    Series,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::Series => "series",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadrature" => Ok(Method::Quadrature),
            "series" => Ok(Method::Series),
            other => Err(Error::invalid(
                "method",
                format!("expected quadrature or series, got {other:?}"),
            )),
        }
    }
}

/// Full scenario. Mean SNRs and pathlosses are linear; transmit power and
/// thermal noise are folded into the mean SNRs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// L, transmit antennas at the access point (one is selected per slot).
    pub ap_antennas: usize,
    /// M, MRC branches at the legitimate receiver.
    pub rx_antennas: usize,
    /// N, cooperating eavesdroppers.
    pub eavesdroppers: usize,
    /// Power-splitting ratio sent to information decoding.
    pub rho: f64,
    /// Fraction of the slot spent on energy harvesting only.
    pub alpha: f64,
    /// R_s in bits/s/Hz.
    pub target_rate: f64,
    /// Rectifier noise variance over thermal noise, σ²/N₀.
    pub sigma2_over_n0: f64,
    pub pathloss_main: f64,
    pub pathloss_eaves: f64,
    /// Legitimate branch statistics, mean before pathloss.
    pub main_branch: KappaMuParams,
    /// Eavesdropper statistics, mean before ω scaling.
    pub eaves: KappaMuParams,
    pub mean_interpretation: MeanInterpretation,
}

impl Default for SystemConfig {
    /// γ̄_s = 10 dB, γ̄_e = 0 dB, PL_s = PL_e = 1 dB, ρ = 0.8, α = 0.1,
    /// κ = μ = 1 on both links, R_s = 1, L = M = N = 1, σ²/N₀ = 1.
    fn default() -> Self {
        let pl = crate::db_to_linear(1.0);
        SystemConfig {
            ap_antennas: 1,
            rx_antennas: 1,
            eavesdroppers: 1,
            rho: 0.8,
            alpha: 0.1,
            target_rate: 1.0,
            sigma2_over_n0: 1.0,
            pathloss_main: pl,
            pathloss_eaves: pl,
            main_branch: KappaMuParams::new(1.0, 1.0, crate::db_to_linear(10.0)).unwrap(),
            eaves: KappaMuParams::new(1.0, 1.0, crate::db_to_linear(0.0)).unwrap(),
            mean_interpretation: MeanInterpretation::PerBranchTimesM,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, n) in [
            ("L", self.ap_antennas),
            ("M", self.rx_antennas),
            ("N", self.eavesdroppers),
        ] {
            if n == 0 {
                return Err(Error::invalid(name, "must be at least 1"));
            }
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::invalid(
                "rho",
                format!("must lie in [0, 1], got {}", self.rho),
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::invalid(
                "alpha",
                format!("must lie in [0, 1], got {}", self.alpha),
            ));
        }
        if !(self.target_rate > 0.0) || !self.target_rate.is_finite() {
            return Err(Error::invalid(
                "R_s",
                format!("must be finite and > 0, got {}", self.target_rate),
            ));
        }
        if !(self.sigma2_over_n0 >= 0.0) || !self.sigma2_over_n0.is_finite() {
            return Err(Error::invalid(
                "sigma2_over_N0",
                format!("must be finite and >= 0, got {}", self.sigma2_over_n0),
            ));
        }
        for (name, pl) in [("PL_s", self.pathloss_main), ("PL_e", self.pathloss_eaves)] {
            if !(pl > 0.0) || !pl.is_finite() {
                return Err(Error::invalid(
                    name,
                    format!("must be finite and > 0, got {pl}"),
                ));
            }
        }
        Ok(())
    }

    /// 2^{R_s} − 1, the main-link SNR needed to support R_s.
    pub fn threshold_snr(&self) -> f64 {
        (self.target_rate * std::f64::consts::LN_2).exp_m1()
    }

    pub fn omega(&self) -> f64 {
        eaves_power_ratio(self.rho, self.sigma2_over_n0, self.pathloss_eaves)
    }

    /// True when the wiretap rate is identically zero (ρ = 0 or α = 1).
    pub fn eaves_silent(&self) -> bool {
        self.omega() == 0.0 || self.alpha >= 1.0
    }

    /// Per-branch main-link statistics after pathloss.
    pub fn main_per_branch(&self) -> Result<KappaMuParams> {
        let mean = match self.mean_interpretation {
            MeanInterpretation::PerBranchTimesM => self.main_branch.mean_snr() / self.pathloss_main,
            MeanInterpretation::CombinerOutput => {
                self.main_branch.mean_snr() / (self.rx_antennas as f64 * self.pathloss_main)
            }
        };
        self.main_branch.with_mean(mean)
    }

    /// Composite MRC SNR of the legitimate receiver.
    pub fn main_composite(&self) -> Result<KappaMuParams> {
        self.main_per_branch()?.mrc_composite(self.rx_antennas)
    }

    /// Eavesdropper SNR statistics with mean ω·γ̄_e, or `None` when ω = 0.
    pub fn eaves_effective(&self) -> Result<Option<KappaMuParams>> {
        let omega = self.omega();
        if omega == 0.0 {
            return Ok(None);
        }
        self.eaves
            .with_mean(omega * self.eaves.mean_snr())
            .map(Some)
    }
}

/// Numerical policy for the evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericsConfig {
    /// Truncation of the Poisson series (t, v, w) and of every Marcum-Q call.
    pub series_budget: AccuracyBudget,
    pub quad_rel_tol: f64,
    pub quad_abs_tol: f64,
    /// Initial upper integration limit is mean + this many standard deviations;
    /// it is then extended until the discarded tail mass is below quad_abs_tol.
    pub tail_cutoff_sigma: f64,
    /// Forces exactly this many terms per series index instead of adaptive
    /// truncation.
    pub fixed_terms: Option<usize>,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            series_budget: AccuracyBudget::default(),
            quad_rel_tol: 1e-10,
            quad_abs_tol: 1e-13,
            tail_cutoff_sigma: 8.0,
            fixed_terms: None,
        }
    }
}

impl NumericsConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, tol) in [
            ("quad_rel_tol", self.quad_rel_tol),
            ("quad_abs_tol", self.quad_abs_tol),
        ] {
            if !(tol > 0.0 && tol <= 1e-3) {
                return Err(Error::invalid(
                    name,
                    format!("must lie in (0, 1e-3], got {tol:e}"),
                ));
            }
        }
        if !(self.tail_cutoff_sigma > 0.0) || !self.tail_cutoff_sigma.is_finite() {
            return Err(Error::invalid(
                "tail_cutoff_sigma",
                format!("must be finite and > 0, got {}", self.tail_cutoff_sigma),
            ));
        }
        if self.fixed_terms == Some(0) {
            return Err(Error::invalid("fixed_terms", "must be at least 1 when set"));
        }
        Ok(())
    }

    pub(crate) fn quadrature_options(&self) -> crate::quadrature::QuadratureOptions {
        crate::quadrature::QuadratureOptions {
            rel_tol: self.quad_rel_tol,
            abs_tol: self.quad_abs_tol,
            max_intervals: 4_000,
            initial_pieces: 8,
        }
    }
}
