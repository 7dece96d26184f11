use super::gamma::{ln_poisson_pmf, reg_gamma_pair};
use super::AccuracyBudget;
use crate::error::{Error, Result};

/// Bounds below this are treated as converged regardless of the partial sums.
const NEGLIGIBLE: f64 = 1e-300;

/// Q_μ(a, b) together with its complement and the series diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarcumQ {
    /// Q_μ(a, b).
    pub q: f64,
    /// 1 − Q_μ(a, b), summed directly rather than by subtraction.
    pub p: f64,
    /// Poisson-mixture terms evaluated.
    pub terms: usize,
}

/// Generalized Marcum-Q function of real order μ > 0.
pub fn marcum_q(mu: f64, a: f64, b: f64, budget: &AccuracyBudget) -> Result<f64> {
    marcum_q_pair(mu, a, b, budget).map(|m| m.q)
}

/// Evaluates Q_μ(a, b) and 1 − Q_μ(a, b) as Poisson mixtures of regularized
/// incomplete gammas:
///
/// Q_μ(a, b) = Σ_k e^{−a²/2} (a²/2)^k / k! · Q(μ + k, b²/2)
///
/// and the same weights on P(μ + k, b²/2) for the complement. The sum starts at
/// the Poisson mode and walks outward; each side stops once a geometric bound
/// on the remaining Poisson mass, scaled by the monotone incomplete-gamma
/// factor, is below `rel_tol` of the partial sum.
pub fn marcum_q_pair(mu: f64, a: f64, b: f64, budget: &AccuracyBudget) -> Result<MarcumQ> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::domain(
            "marcum_q",
            format!("requires mu > 0, got {mu}"),
        ));
    }
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::domain(
            "marcum_q",
            format!("requires finite a >= 0, got {a}"),
        ));
    }
    if !(b >= 0.0) {
        return Err(Error::domain(
            "marcum_q",
            format!("requires b >= 0, got {b}"),
        ));
    }
    poisson_gamma_mixture(mu, 0.5 * a * a, 0.5 * b * b, budget)
}

/// Σ_k Pois(k; λ) · (Q, P)(μ + k, x), i.e. Q_μ(√(2λ), √(2x)) and its complement.
pub(crate) fn poisson_gamma_mixture(
    mu: f64,
    lambda: f64,
    x: f64,
    budget: &AccuracyBudget,
) -> Result<MarcumQ> {
    if x == 0.0 {
        return Ok(MarcumQ {
            q: 1.0,
            p: 0.0,
            terms: 0,
        });
    }
    if lambda == 0.0 {
        let g = reg_gamma_pair(mu, x)?;
        return Ok(MarcumQ {
            q: g.upper,
            p: g.lower,
            terms: 1,
        });
    }

    let rel_tol = budget.rel_tol();
    let ln_lambda = lambda.ln();
    let converged = |bound: f64, sum: f64| bound <= rel_tol * sum || bound < NEGLIGIBLE;

    let mode = lambda.floor() as usize;
    let ln_w_mode = ln_poisson_pmf(mode, lambda);
    let mut q = 0.0;
    let mut p = 0.0;
    let mut terms = 0;

    let mut k = mode;
    let mut ln_w = ln_w_mode;
    loop {
        let w = ln_w.exp();
        let g = reg_gamma_pair(mu + k as f64, x)?;
        q += w * g.upper;
        p += w * g.lower;
        terms += 1;

        let ln_w_next = ln_w + ln_lambda - (k as f64 + 1.0).ln();
        // k ≥ ⌊λ⌋ so the ratio λ/(j+1) for j > k is below 1.
        let tail_mass = ln_w_next.exp() / (1.0 - lambda / (k as f64 + 2.0));
        if converged(tail_mass, q) && converged(tail_mass * g.lower, p) {
            break;
        }
        if terms >= budget.max_terms() {
            return Err(Error::Convergence {
                func: "marcum_q",
                terms,
                partial: q,
                bound: tail_mass,
            });
        }
        k += 1;
        ln_w = ln_w_next;
    }

    let mut ln_w = ln_w_mode;
    for k in (0..mode).rev() {
        ln_w += (k as f64 + 1.0).ln() - ln_lambda;
        let w = ln_w.exp();
        let g = reg_gamma_pair(mu + k as f64, x)?;
        q += w * g.upper;
        p += w * g.lower;
        terms += 1;
        if k == 0 {
            break;
        }
        let head_mass = w * (k as f64 / lambda) / (1.0 - (k as f64 - 1.0) / lambda);
        if converged(head_mass * g.upper, q) && converged(head_mass, p) {
            break;
        }
        if terms >= budget.max_terms() {
            return Err(Error::Convergence {
                func: "marcum_q",
                terms,
                partial: q,
                bound: head_mass,
            });
        }
    }

    // Both sums met their relative bounds; the smaller one is the more
    // accurate in absolute terms, so the larger is taken as its complement.
    let (q, p) = if p <= q { (1.0 - p, p) } else { (q, 1.0 - q) };
    Ok(MarcumQ {
        q: q.clamp(0.0, 1.0),
        p: p.clamp(0.0, 1.0),
        terms,
    })
}
