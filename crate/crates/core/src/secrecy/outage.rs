use super::channel::gamma_threshold_unchecked;
use super::series::{poisson_series, upper_limit};
use super::{Method, NumericsConfig, SystemConfig};
use crate::error::Result;
use crate::fading::KappaMuParams;
use crate::quadrature::try_integrate;
use crate::specfun::{ln_gamma_unchecked, reg_lower_gamma, reg_upper_gamma};

/// Series lengths used by the series evaluator: `t` indexes the eavesdropper
/// expansion, `v` the main-link expansion (largest inner count across `v`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TermsUsed {
    pub t: usize,
    pub v: usize,
}

/// A probability with its numerical error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    /// Quadrature error, certified tail cutoff, and series remainder bounds.
    pub abs_error: f64,
    pub terms: Option<TermsUsed>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageResult {
    /// Secrecy outage probability with antenna selection over L antennas.
    pub p_out: f64,
    /// Single-eavesdropper factor Pr[γ_e < γ_th(γ_s), γ_s > 2^{R_s} − 1].
    pub p_eve: f64,
    /// Per-antenna coverage probability with all N eavesdroppers.
    pub p_cov_l: f64,
    /// (1 − p_eve^N)^L: the outage if the N eavesdropper events were
    /// independent of each other. Equals `p_out` only for N = 1.
    pub p_out_independent_eves: f64,
    pub terms_used: Option<TermsUsed>,
    pub quad_error_estimate: f64,
    pub method: Method,
}

/// Per-antenna coverage probability by direct quadrature.
pub fn p_eve_quadrature(config: &SystemConfig, numerics: &NumericsConfig) -> Result<Evaluation> {
    config.validate()?;
    numerics.validate()?;
    coverage_quadrature(config, numerics, 1)
}

/// Single-eavesdropper factor by the Poisson double series: with
/// λ_e = μ_e κ_e, λ_s = Mμ_s κ_s and the Gamma(Mμ_s + v, r_s) density g_v,
///
/// P_eve = Σ_t Σ_v Pois(t; λ_e) Pois(v; λ_s) ∫_T^∞ g_v(γ) P(μ_e + t, r_e γ_th(γ)) dγ.
///
/// Each inner integral is done by quadrature.
pub fn p_eve_series(config: &SystemConfig, numerics: &NumericsConfig) -> Result<Evaluation> {
    config.validate()?;
    numerics.validate()?;
    let main = config.main_composite()?;
    let threshold = config.threshold_snr();
    let eaves = match active_eaves(config)? {
        Some(e) => e,
        None => return silent_series(&main, threshold, numerics),
    };

    let rate = config.target_rate;
    let alpha = config.alpha;
    let eaves_rate = eaves.rate();
    let opts = numerics.quadrature_options();
    let mut error = 0.0;
    let mut max_inner = 0;

    let outer = poisson_series("p_eve_series", main.poisson_mean(), numerics, |v| {
        let shape = main.mu() + v as f64;
        let density = GammaDensity::new(shape, main.rate());
        let (upper, tail) = density.upper_limit(threshold, numerics)?;
        let mut inner_error = 0.0;
        let inner = poisson_series("p_eve_series", eaves.poisson_mean(), numerics, |t| {
            let eaves_shape = eaves.mu() + t as f64;
            let r = try_integrate(
                |g| {
                    let y = gamma_threshold_unchecked(g, rate, alpha);
                    let p = if y.is_finite() {
                        reg_lower_gamma(eaves_shape, eaves_rate * y)?
                    } else {
                        1.0
                    };
                    Ok(p * density.pdf(g))
                },
                threshold,
                upper,
                &opts,
            )?;
            inner_error += r.abs_error + tail;
            // P(a, x) decreases in a, so later terms are bounded by this one.
            Ok((r.value, r.value + r.abs_error + tail))
        })?;
        max_inner = max_inner.max(inner.terms);
        error += inner_error + inner.remainder;
        Ok((inner.value, 1.0))
    })?;

    Ok(Evaluation {
        value: outer.value.clamp(0.0, 1.0),
        abs_error: error + outer.remainder,
        terms: Some(TermsUsed {
            t: max_inner,
            v: outer.terms,
        }),
    })
}

/// Secrecy outage probability P_out = (1 − P_cov)^L with the chosen evaluator.
///
/// ρ = 0 or α = 1 silences the wiretap link, so P_cov = 1 − F_s(2^{R_s} − 1)
/// and P_out reduces to 1 − P_t.
pub fn secrecy_outage(
    config: &SystemConfig,
    numerics: &NumericsConfig,
    method: Method,
) -> Result<OutageResult> {
    config.validate()?;
    numerics.validate()?;
    let n = config.eavesdroppers;
    let (eve, cov) = match method {
        Method::Quadrature => {
            let eve = coverage_quadrature(config, numerics, 1)?;
            let cov = if n == 1 || config.eaves_silent() {
                eve
            } else {
                coverage_quadrature(config, numerics, n)?
            };
            (eve, cov)
        }
        Method::Series => {
            let eve = p_eve_series(config, numerics)?;
            let cov = if n == 1 || config.eaves_silent() {
                eve
            } else {
                coverage_series(config, numerics, n)?
            };
            (eve, cov)
        }
    };
    let l = config.ap_antennas as i32;
    let p_out = (1.0 - cov.value).powi(l).clamp(0.0, 1.0);
    let p_out_independent_eves = (1.0 - eve.value.powi(n as i32)).powi(l).clamp(0.0, 1.0);
    Ok(OutageResult {
        p_out,
        p_eve: eve.value,
        p_cov_l: cov.value,
        p_out_independent_eves,
        terms_used: cov.terms.or(eve.terms),
        quad_error_estimate: cov.abs_error,
        method,
    })
}

fn active_eaves(config: &SystemConfig) -> Result<Option<KappaMuParams>> {
    if config.alpha >= 1.0 {
        return Ok(None);
    }
    config.eaves_effective()
}

/// ∫_T^U F_e(γ_th(γ))^n f_s(γ) dγ plus the certified tail beyond U.
fn coverage_quadrature(
    config: &SystemConfig,
    numerics: &NumericsConfig,
    n: usize,
) -> Result<Evaluation> {
    let main = config.main_composite()?;
    let threshold = config.threshold_snr();
    let budget = &numerics.series_budget;
    let eaves = match active_eaves(config)? {
        Some(e) => e,
        None => {
            let sf = main.sf(threshold, budget)?;
            return Ok(Evaluation {
                value: sf,
                abs_error: budget.rel_tol() * sf,
                terms: None,
            });
        }
    };
    let (upper, tail) = upper_limit(
        threshold,
        main.mean_snr(),
        main.variance().sqrt(),
        numerics,
        |g| main.sf(g, budget),
    )?;
    let rate = config.target_rate;
    let alpha = config.alpha;
    let power = n as i32;
    let r = try_integrate(
        |g| {
            let f_s = main.pdf(g)?;
            if f_s == 0.0 {
                return Ok(0.0);
            }
            let y = gamma_threshold_unchecked(g, rate, alpha);
            let f_e = if y.is_finite() {
                eaves.cdf(y, budget)?
            } else {
                1.0
            };
            Ok(f_e.powi(power) * f_s)
        },
        threshold,
        upper,
        &numerics.quadrature_options(),
    )?;
    Ok(Evaluation {
        value: r.value.clamp(0.0, 1.0),
        abs_error: r.abs_error + tail,
        terms: None,
    })
}

/// Series form for n > 1 eavesdroppers: the main-link expansion stays a
/// Poisson series in v, while F_e is summed over t inside the integrand
/// because F_e^n does not split term-wise.
fn coverage_series(
    config: &SystemConfig,
    numerics: &NumericsConfig,
    n: usize,
) -> Result<Evaluation> {
    let main = config.main_composite()?;
    let threshold = config.threshold_snr();
    let eaves = match active_eaves(config)? {
        Some(e) => e,
        None => return silent_series(&main, threshold, numerics),
    };
    let rate = config.target_rate;
    let alpha = config.alpha;
    let power = n as i32;
    let opts = numerics.quadrature_options();
    let mut error = 0.0;
    let mut max_inner = 0;

    let eaves_cdf = |y: f64, max_inner: &mut usize| -> Result<(f64, f64)> {
        if !y.is_finite() {
            return Ok((1.0, 0.0));
        }
        let x = eaves.rate() * y;
        let s = poisson_series("coverage_series", eaves.poisson_mean(), numerics, |t| {
            let p = reg_lower_gamma(eaves.mu() + t as f64, x)?;
            Ok((p, p))
        })?;
        *max_inner = (*max_inner).max(s.terms);
        Ok((s.value.min(1.0), s.remainder))
    };

    let outer = poisson_series("coverage_series", main.poisson_mean(), numerics, |v| {
        let density = GammaDensity::new(main.mu() + v as f64, main.rate());
        let (upper, tail) = density.upper_limit(threshold, numerics)?;
        let mut remainder = 0.0f64;
        let r = try_integrate(
            |g| {
                let (f_e, rem) =
                    eaves_cdf(gamma_threshold_unchecked(g, rate, alpha), &mut max_inner)?;
                remainder = remainder.max(rem);
                Ok(f_e.powi(power) * density.pdf(g))
            },
            threshold,
            upper,
            &opts,
        )?;
        // (F + δ)^n − F^n ≤ n δ for F + δ ≤ 1.
        error += r.abs_error + tail + n as f64 * remainder;
        Ok((r.value, 1.0))
    })?;

    Ok(Evaluation {
        value: outer.value.clamp(0.0, 1.0),
        abs_error: error + outer.remainder,
        terms: Some(TermsUsed {
            t: max_inner,
            v: outer.terms,
        }),
    })
}

/// Σ_v Pois(v; λ_s) Q(Mμ_s + v, r_s T): coverage when the wiretap rate is 0.
fn silent_series(
    main: &KappaMuParams,
    threshold: f64,
    numerics: &NumericsConfig,
) -> Result<Evaluation> {
    let x = main.rate() * threshold;
    let s = poisson_series("silent_series", main.poisson_mean(), numerics, |v| {
        Ok((reg_upper_gamma(main.mu() + v as f64, x)?, 1.0))
    })?;
    Ok(Evaluation {
        value: s.value.clamp(0.0, 1.0),
        abs_error: s.remainder,
        terms: Some(TermsUsed { t: 0, v: s.terms }),
    })
}

/// Gamma(shape, rate) density evaluated in log form.
struct GammaDensity {
    shape: f64,
    rate: f64,
    ln_norm: f64,
}

impl GammaDensity {
    fn new(shape: f64, rate: f64) -> Self {
        GammaDensity {
            shape,
            rate,
            ln_norm: shape * rate.ln() - ln_gamma_unchecked(shape),
        }
    }

    fn pdf(&self, g: f64) -> f64 {
        if g <= 0.0 {
            return 0.0;
        }
        (self.ln_norm + (self.shape - 1.0) * g.ln() - self.rate * g).exp()
    }

    fn upper_limit(&self, start: f64, numerics: &NumericsConfig) -> Result<(f64, f64)> {
        upper_limit(
            start,
            self.shape / self.rate,
            self.shape.sqrt() / self.rate,
            numerics,
            |g| reg_upper_gamma(self.shape, self.rate * g),
        )
    }
}
