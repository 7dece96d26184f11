use super::series::poisson_series;
use super::{NumericsConfig, SystemConfig};
use crate::error::Result;
use crate::specfun::{marcum_q_pair, reg_gamma_pair};

/// P_t = 1 − [Σ_w Pois(w; Mμ_sκ_s) P(Mμ_s + w, r_s (2^{R_s} − 1))]^L: the
/// probability that the selected antenna's main link supports R_s.
pub fn transmission_probability(config: &SystemConfig, numerics: &NumericsConfig) -> Result<f64> {
    config.validate()?;
    numerics.validate()?;
    let main = config.main_composite()?;
    let x = main.rate() * config.threshold_snr();
    let cdf = poisson_series(
        "transmission_probability",
        main.poisson_mean(),
        numerics,
        |w| {
            let p = reg_gamma_pair(main.mu() + w as f64, x)?.lower;
            Ok((p, p))
        },
    )?
    .value;
    // Past the median 1 − cdf cancels; sum the survival terms directly.
    let sf = if cdf <= 0.5 {
        1.0 - cdf
    } else {
        poisson_series(
            "transmission_probability",
            main.poisson_mean(),
            numerics,
            |w| Ok((reg_gamma_pair(main.mu() + w as f64, x)?.upper, 1.0)),
        )?
        .value
    };
    Ok(at_least_one(sf.clamp(0.0, 1.0), config.ap_antennas))
}

/// 1 − (1 − sf)^L without cancellation for small sf.
fn at_least_one(sf: f64, l: usize) -> f64 {
    if sf >= 1.0 {
        1.0
    } else {
        -(l as f64 * (-sf).ln_1p()).exp_m1()
    }
}

/// Same quantity through the Marcum-Q form of the κ-μ CDF:
/// 1 − [1 − Q_{Mμ_s}(√(2Mμ_sκ_s), √(2 r_s (2^{R_s} − 1)))]^L.
pub fn transmission_probability_cdf(
    config: &SystemConfig,
    numerics: &NumericsConfig,
) -> Result<f64> {
    config.validate()?;
    numerics.validate()?;
    let main = config.main_composite()?;
    let a = (2.0 * main.poisson_mean()).sqrt();
    let b = (2.0 * main.rate() * config.threshold_snr()).sqrt();
    let q = marcum_q_pair(main.mu(), a, b, &numerics.series_budget)?.q;
    Ok(at_least_one(q, config.ap_antennas))
}

/// Secrecy throughput τ = R_s · P_t in bits/s/Hz.
pub fn secrecy_throughput(config: &SystemConfig, numerics: &NumericsConfig) -> Result<f64> {
    Ok(config.target_rate * transmission_probability(config, numerics)?)
}
