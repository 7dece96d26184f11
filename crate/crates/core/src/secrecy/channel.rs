use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};

/// Free-space style pathloss (4π/(G_t G_r λ))² · d^β as a linear factor.
pub fn pathloss(
    distance: f64,
    exponent: f64,
    gain_tx: f64,
    gain_rx: f64,
    wavelength: f64,
) -> Result<f64> {
    for (name, v) in [
        ("distance", distance),
        ("exponent", exponent),
        ("gain_tx", gain_tx),
        ("gain_rx", gain_rx),
        ("wavelength", wavelength),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain(
                "pathloss",
                format!("{name} must be finite and > 0, got {v}"),
            ));
        }
    }
    let k = 4.0 * PI / (gain_tx * gain_rx * wavelength);
    Ok(k * k * distance.powf(exponent))
}

/// ω = ρ / (PL_e (ρ + σ²/N₀)), the factor scaling the eavesdropper's mean SNR.
/// ρ = 0 gives 0 even when σ²/N₀ = 0.
pub fn eaves_power_ratio(rho: f64, sigma2_over_n0: f64, pathloss_eaves: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    rho / (pathloss_eaves * (rho + sigma2_over_n0))
}

/// Largest eavesdropper SNR that still leaves a secrecy rate of R_s when the
/// main link has SNR γ_s: ((1+γ_s)/2^{R_s})^{1/(1−α)} − 1.
pub fn gamma_threshold(gamma_s: f64, target_rate: f64, alpha: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::domain(
            "gamma_threshold",
            format!("requires 0 <= alpha < 1, got {alpha}; alpha = 1 has no wiretap rate"),
        ));
    }
    let floor = (target_rate * LN_2).exp_m1();
    if !(gamma_s >= floor) {
        return Err(Error::domain(
            "gamma_threshold",
            format!("requires gamma_s >= 2^R_s - 1 = {floor}, got {gamma_s}"),
        ));
    }
    Ok(gamma_threshold_unchecked(gamma_s, target_rate, alpha))
}

/// May return +∞ when the exponent 1/(1−α) is large.
pub(crate) fn gamma_threshold_unchecked(gamma_s: f64, target_rate: f64, alpha: f64) -> f64 {
    let log_ratio = gamma_s.ln_1p() - target_rate * LN_2;
    (log_ratio / (1.0 - alpha)).exp_m1().max(0.0)
}
