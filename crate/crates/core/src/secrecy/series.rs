//! Shared machinery for Poisson-weighted series and tail cutoffs.

use crate::error::{Error, Result};
use crate::secrecy::NumericsConfig;
use crate::specfun::ln_poisson_pmf;

/// Weights below this are skipped without evaluating the term.
const NEGLIGIBLE: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SeriesSum {
    pub value: f64,
    pub terms: usize,
    /// Bound on the discarded remainder.
    pub remainder: f64,
}

/// Upper bound on Σ_{j>k} Pois(j; λ). Conservative (1) before the mode.
fn poisson_tail_after(k: usize, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let next = k as f64 + 2.0;
    if next <= lambda {
        return 1.0;
    }
    ln_poisson_pmf(k + 1, lambda).exp() / (1.0 - lambda / next)
}

/// Σ_k Pois(k; λ) · term(k).
///
/// `term(k)` returns the term value and a bound that holds for every later
/// term; the series stops once the Poisson tail mass times that bound falls
/// below `rel_tol` of the partial sum. With `fixed_terms` exactly that many
/// terms are summed and the remainder bound is only reported.
pub(crate) fn poisson_series<F>(
    func: &'static str,
    lambda: f64,
    numerics: &NumericsConfig,
    mut term: F,
) -> Result<SeriesSum>
where
    F: FnMut(usize) -> Result<(f64, f64)>,
{
    let budget = &numerics.series_budget;
    let mut sum = 0.0;
    let mut k = 0;
    loop {
        let w = ln_poisson_pmf(k, lambda).exp();
        let bound = if w > NEGLIGIBLE {
            let (value, later_bound) = term(k)?;
            sum += w * value;
            later_bound
        } else {
            1.0
        };
        let remainder = poisson_tail_after(k, lambda) * bound;
        k += 1;
        let done = match numerics.fixed_terms {
            Some(n) => k >= n || lambda == 0.0,
            None => remainder <= budget.rel_tol() * sum || remainder < NEGLIGIBLE,
        };
        if done {
            return Ok(SeriesSum {
                value: sum,
                terms: k,
                remainder,
            });
        }
        if k >= budget.max_terms() {
            return Err(Error::Convergence {
                func,
                terms: k,
                partial: sum,
                bound: remainder,
            });
        }
    }
}

/// Picks an upper integration limit for a density starting at `start`:
/// begins at max(start, center) + tail_cutoff_sigma · spread and doubles the
/// distance from `start` until the survival function is below a tenth of
/// `quad_abs_tol`. Returns the limit and the certified discarded mass.
pub(crate) fn upper_limit<S>(
    start: f64,
    center: f64,
    spread: f64,
    numerics: &NumericsConfig,
    mut survival: S,
) -> Result<(f64, f64)>
where
    S: FnMut(f64) -> Result<f64>,
{
    let target = 0.1 * numerics.quad_abs_tol;
    let mut upper = start.max(center) + numerics.tail_cutoff_sigma * spread;
    let mut tail = survival(upper)?;
    for _ in 0..200 {
        if tail <= target {
            return Ok((upper, tail));
        }
        upper += (upper - start).max(spread);
        tail = survival(upper)?;
    }
    Err(Error::domain(
        "upper_limit",
        format!("tail mass {tail:e} still above {target:e} at {upper:e}"),
    ))
}
