//! Cross-checks of one configuration: both analytic evaluators, Monte Carlo,
//! fixed ten-term truncation, and the silent-eavesdropper identity.

use swipt_secrecy::montecarlo::simulate_secrecy_outage;
use swipt_secrecy::secrecy::{
    p_eve_quadrature, p_eve_series, secrecy_outage, transmission_probability, Method,
    NumericsConfig, SystemConfig,
};
use swipt_secrecy::McEstimate;

use crate::error::CliError;
use crate::table::{fmt_g, Table};

pub const MIN_TRIALS: u64 = 10_000;

/// Absolute P_out tolerance floor against Monte Carlo; the band widens to
/// four standard errors when those are larger.
pub const MC_ABS_TOL: f64 = 0.01;
pub const SERIES_REL_TOL: f64 = 1e-6;
pub const TRUNCATION_ABS_TOL: f64 = 1e-6;
pub const IDENTITY_ABS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// Diagnostic disagreement that does not invalidate the authoritative
    /// quadrature result.
    Warn,
    Fail,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Warn => "WARN",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub reference: f64,
    pub delta: f64,
    pub tolerance: f64,
    pub status: Status,
}

impl Check {
    fn new(
        name: &'static str,
        value: f64,
        reference: f64,
        delta: f64,
        tolerance: f64,
        miss: Status,
    ) -> Self {
        Check {
            name,
            value,
            reference,
            delta,
            tolerance,
            status: if delta <= tolerance {
                Status::Pass
            } else {
                miss
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
    pub mc: McEstimate,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new([
            "check",
            "value",
            "reference",
            "delta",
            "tolerance",
            "status",
        ]);
        t.comments.push(format!(
            "mc: p_hat {} stderr {} ci [{}, {}] trials {} seed {}",
            fmt_g(self.mc.p_hat),
            fmt_g(self.mc.stderr),
            fmt_g(self.mc.ci_low),
            fmt_g(self.mc.ci_high),
            self.mc.n_trials,
            self.mc.seed
        ));
        for c in &self.checks {
            t.push_row(vec![
                c.name.to_string(),
                fmt_g(c.value),
                fmt_g(c.reference),
                fmt_g(c.delta),
                fmt_g(c.tolerance),
                c.status.as_str().to_string(),
            ]);
        }
        t
    }
}

/// Rows:
/// - `mc_vs_quadrature`: P_out against the simulation, FAIL outside
///   max(0.01, 4·stderr);
/// - `series_vs_quadrature`: relative P_eve delta, WARN above 1e-6;
/// - `p_out_series`: absolute P_out delta between evaluators, WARN above 1e-6;
/// - `fixed_10_terms`: P_out with ten terms per index against adaptive
///   truncation, WARN above 1e-6;
/// - `silent_identity` (ρ = 0 or α = 1 only): P_out against 1 − P_t, FAIL
///   above 1e-9.
pub fn run_validate(
    system: &SystemConfig,
    numerics: &NumericsConfig,
    trials: u64,
    seed: u64,
) -> Result<Report, CliError> {
    if trials < MIN_TRIALS {
        return Err(CliError::Usage(format!(
            "validate needs at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    let quad = secrecy_outage(system, numerics, Method::Quadrature)?;
    let series = secrecy_outage(system, numerics, Method::Series)?;
    let eve_q = p_eve_quadrature(system, numerics)?.value;
    let eve_s = p_eve_series(system, numerics)?.value;
    let ten = NumericsConfig {
        fixed_terms: Some(10),
        ..*numerics
    };
    let truncated = secrecy_outage(system, &ten, Method::Series)?;
    let mc = simulate_secrecy_outage(system, trials, seed)?;

    let mut checks = vec![
        Check::new(
            "mc_vs_quadrature",
            quad.p_out,
            mc.p_hat,
            (quad.p_out - mc.p_hat).abs(),
            MC_ABS_TOL.max(4.0 * mc.stderr),
            Status::Fail,
        ),
        Check::new(
            "series_vs_quadrature",
            eve_s,
            eve_q,
            relative(eve_s, eve_q),
            SERIES_REL_TOL,
            Status::Warn,
        ),
        Check::new(
            "p_out_series",
            series.p_out,
            quad.p_out,
            (series.p_out - quad.p_out).abs(),
            TRUNCATION_ABS_TOL,
            Status::Warn,
        ),
        Check::new(
            "fixed_10_terms",
            truncated.p_out,
            series.p_out,
            (truncated.p_out - series.p_out).abs(),
            TRUNCATION_ABS_TOL,
            Status::Warn,
        ),
    ];
    if system.eaves_silent() {
        let complement = 1.0 - transmission_probability(system, numerics)?;
        checks.push(Check::new(
            "silent_identity",
            quad.p_out,
            complement,
            (quad.p_out - complement).abs(),
            IDENTITY_ABS_TOL,
            Status::Fail,
        ));
    }
    Ok(Report { checks, mc })
}

fn relative(x: f64, reference: f64) -> f64 {
    if x == reference {
        0.0
    } else {
        (x - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
    }
}
