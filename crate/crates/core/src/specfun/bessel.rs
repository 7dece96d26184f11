use super::gamma::ln_gamma_unchecked;
use crate::error::{Error, Result};

const MAX_ITER: usize = 10_000_000;

/// ln ₀F₁(; b; c) = ln Σ_k c^k Γ(b) / (k! Γ(b + k)) for b > 0, c ≥ 0.
///
/// All terms are positive, so the sum is accumulated relative to its largest
/// term and walked outward in both directions. This keeps the result finite
/// when the series itself would overflow.
pub fn ln_hyp0f1(b: f64, c: f64) -> Result<f64> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::domain(
            "ln_hyp0f1",
            format!("requires b > 0, got {b}"),
        ));
    }
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::domain(
            "ln_hyp0f1",
            format!("requires finite c >= 0, got {c}"),
        ));
    }
    Ok(ln_hyp0f1_unchecked(b, c))
}

pub(crate) fn ln_hyp0f1_unchecked(b: f64, c: f64) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    let ratio = |k: usize| c / ((k as f64 + 1.0) * (b + k as f64));

    // Smallest k whose successor term is smaller, i.e. the peak term.
    let root = 0.5 * (((b - 1.0) * (b - 1.0) + 4.0 * c).sqrt() - (b + 1.0));
    let peak = if root > 0.0 { root.ceil() as usize } else { 0 };
    let ln_peak = if peak == 0 {
        0.0
    } else {
        let k = peak as f64;
        k * c.ln() - ln_gamma_unchecked(k + 1.0) - ln_gamma_unchecked(b + k) + ln_gamma_unchecked(b)
    };

    let mut sum = 1.0;
    let mut term = 1.0;
    for k in (peak..).take(MAX_ITER) {
        let r = ratio(k);
        term *= r;
        sum += term;
        if r < 1.0 && term * r / (1.0 - r) <= f64::EPSILON * sum {
            break;
        }
    }
    term = 1.0;
    for k in (0..peak).rev() {
        term /= ratio(k);
        sum += term;
        if term <= 0.1 * f64::EPSILON * sum {
            break;
        }
    }
    ln_peak + sum.ln()
}

/// ln I_ν(x) for ν ≥ 0, x ≥ 0. Finite for arguments where I_ν itself
/// overflows (x ≳ 710).
pub fn ln_bessel_i(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::domain(
            "bessel_i",
            format!("requires nu >= 0, got {nu}"),
        ));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(
            "bessel_i",
            format!("requires finite x >= 0, got {x}"),
        ));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 0.0 } else { f64::NEG_INFINITY });
    }
    let half = 0.5 * x;
    Ok(nu * half.ln() - ln_gamma_unchecked(nu + 1.0) + ln_hyp0f1_unchecked(nu + 1.0, half * half))
}

/// Modified Bessel function of the first kind I_ν(x).
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    ln_bessel_i(nu, x).map(f64::exp)
}
