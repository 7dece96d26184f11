//! The κ-μ SNR distribution.
//!
//! With λ = μκ and rate r = μ(1+κ)/ȳ, the SNR density is the Poisson mixture
//!
//! f(γ) = Σ_k Pois(k; λ) · Gamma(γ; shape μ + k, rate r),
//!
//! which is the Bessel-form density with the κ^{−(μ−1)/2} prefactor cancelled
//! against the series of I_{μ−1}. κ = 0 (Nakagami-m / Rayleigh) is therefore
//! exact rather than a limit.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};

use crate::error::{Error, Result};
use crate::specfun::{
    ln_gamma_unchecked, ln_hyp0f1_unchecked, poisson_gamma_mixture, AccuracyBudget, MarcumQ,
};

/// One κ-μ distributed SNR: κ ≥ 0 dominant-to-scattered power ratio, μ > 0
/// multipath clusters, and the linear mean SNR ȳ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaMuParams {
    kappa: f64,
    mu: f64,
    mean_snr: f64,
}

impl KappaMuParams {
    pub fn new(kappa: f64, mu: f64, mean_snr: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::invalid(
                "kappa",
                format!("must be finite and >= 0, got {kappa}"),
            ));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::invalid(
                "mu",
                format!("must be finite and > 0, got {mu}"),
            ));
        }
        if !(mean_snr > 0.0) || !mean_snr.is_finite() {
            return Err(Error::invalid(
                "mean_snr",
                format!("must be finite and > 0, got {mean_snr}"),
            ));
        }
        Ok(KappaMuParams {
            kappa,
            mu,
            mean_snr,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn mean_snr(&self) -> f64 {
        self.mean_snr
    }

    /// Same shape with a different mean.
    pub fn with_mean(&self, mean_snr: f64) -> Result<Self> {
        KappaMuParams::new(self.kappa, self.mu, mean_snr)
    }

    /// Poisson mean μκ of the mixture representation.
    pub fn poisson_mean(&self) -> f64 {
        self.mu * self.kappa
    }

    /// Gamma rate μ(1+κ)/ȳ of the mixture representation.
    pub fn rate(&self) -> f64 {
        self.mu * (1.0 + self.kappa) / self.mean_snr
    }

    pub fn variance(&self) -> f64 {
        let k1 = 1.0 + self.kappa;
        self.mean_snr * self.mean_snr * (1.0 + 2.0 * self.kappa) / (self.mu * k1 * k1)
    }

    /// Composite SNR of `branches` i.i.d. MRC branches: (κ, Mμ, Mȳ).
    pub fn mrc_composite(&self, branches: usize) -> Result<Self> {
        mrc_composite(self, branches)
    }

    /// ln f(γ). At γ = 0 the density is +∞ for μ < 1 and 0 for μ > 1.
    pub fn ln_pdf(&self, gamma: f64) -> Result<f64> {
        if !(gamma >= 0.0) {
            return Err(Error::domain(
                "kappa_mu_pdf",
                format!("requires gamma >= 0, got {gamma}"),
            ));
        }
        let lambda = self.poisson_mean();
        let rate = self.rate();
        if gamma == 0.0 {
            return Ok(match self.mu.partial_cmp(&1.0) {
                Some(std::cmp::Ordering::Less) => f64::INFINITY,
                Some(std::cmp::Ordering::Equal) => rate.ln() - lambda,
                _ => f64::NEG_INFINITY,
            });
        }
        if gamma.is_infinite() {
            return Ok(f64::NEG_INFINITY);
        }
        let rg = rate * gamma;
        Ok(
            -lambda - rg + self.mu * rate.ln() + (self.mu - 1.0) * gamma.ln()
                - ln_gamma_unchecked(self.mu)
                + ln_hyp0f1_unchecked(self.mu, lambda * rg),
        )
    }

    pub fn pdf(&self, gamma: f64) -> Result<f64> {
        self.ln_pdf(gamma).map(f64::exp)
    }

    /// F(γ) and 1 − F(γ), both summed directly.
    ///
    /// F(γ) = 1 − Q_μ(√(2κμ), √(2(κ+1)μγ/ȳ)).
    pub fn cdf_pair(&self, gamma: f64, budget: &AccuracyBudget) -> Result<MarcumQ> {
        if !(gamma >= 0.0) {
            return Err(Error::domain(
                "kappa_mu_cdf",
                format!("requires gamma >= 0, got {gamma}"),
            ));
        }
        poisson_gamma_mixture(self.mu, self.poisson_mean(), self.rate() * gamma, budget)
    }

    pub fn cdf(&self, gamma: f64, budget: &AccuracyBudget) -> Result<f64> {
        self.cdf_pair(gamma, budget).map(|m| m.p)
    }

    /// Survival function 1 − F(γ) = Q_μ(·, ·).
    pub fn sf(&self, gamma: f64, budget: &AccuracyBudget) -> Result<f64> {
        self.cdf_pair(gamma, budget).map(|m| m.q)
    }

    pub fn sampler(&self) -> KappaMuSampler {
        KappaMuSampler::new(self)
    }
}

/// Composite SNR of `branches` i.i.d. κ-μ branches after maximum ratio
/// combining: κ is unchanged, μ and the mean scale by the branch count.
pub fn mrc_composite(branch: &KappaMuParams, branches: usize) -> Result<KappaMuParams> {
    if branches == 0 {
        return Err(Error::invalid(
            "M",
            "at least one receive branch is required",
        ));
    }
    let m = branches as f64;
    KappaMuParams::new(branch.kappa, m * branch.mu, m * branch.mean_snr)
}

/// Draws κ-μ SNRs as ȳ·G/(μ(1+κ)) with G ~ Gamma(μ + P, 1), P ~ Poisson(μκ):
/// a scaled noncentral χ² with 2μ degrees of freedom, valid for any real μ.
#[derive(Debug, Clone)]
pub struct KappaMuSampler {
    poisson: Option<Poisson<f64>>,
    mu: f64,
    scale: f64,
}

impl KappaMuSampler {
    pub fn new(params: &KappaMuParams) -> Self {
        let lambda = params.poisson_mean();
        let poisson = if lambda > 0.0 {
            Some(Poisson::new(lambda).expect("finite positive Poisson mean"))
        } else {
            None
        };
        KappaMuSampler {
            poisson,
            mu: params.mu,
            scale: 1.0 / params.rate(),
        }
    }
}

impl Distribution<f64> for KappaMuSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let extra = self.poisson.as_ref().map_or(0.0, |p| p.sample(rng));
        let shape = self.mu + extra;
        Gamma::new(shape, self.scale)
            .expect("positive finite gamma shape")
            .sample(rng)
    }
}

/// One κ-μ draw; for repeated sampling build a [`KappaMuSampler`] once.
pub fn sample<R: Rng + ?Sized>(params: &KappaMuParams, rng: &mut R) -> f64 {
    KappaMuSampler::new(params).sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use statrs::distribution::{Continuous, Discrete, Gamma as GammaDist, Poisson as PoissonDist};

    fn params(kappa: f64, mu: f64, mean: f64) -> KappaMuParams {
        KappaMuParams::new(kappa, mu, mean).unwrap()
    }

    /// Poisson-weighted gamma-density mixture evaluated with statrs.
    fn mixture_pdf_oracle(p: &KappaMuParams, gamma: f64) -> f64 {
        let pois = PoissonDist::new(p.mu * p.kappa).unwrap();
        (0..400u64)
            .map(|k| {
                let g =
                    GammaDist::new(p.mu + k as f64, p.mu * (1.0 + p.kappa) / p.mean_snr).unwrap();
                pois.pmf(k) * g.pdf(gamma)
            })
            .sum()
    }

    #[test]
    fn validation() {
        assert!(KappaMuParams::new(-0.1, 1.0, 1.0).is_err());
        assert!(KappaMuParams::new(0.0, 0.0, 1.0).is_err());
        assert!(KappaMuParams::new(0.0, 1.0, 0.0).is_err());
        assert!(KappaMuParams::new(0.0, 1.0, f64::INFINITY).is_err());
        assert!(params(1.0, 1.0, 1.0).pdf(-1.0).is_err());
        assert!(params(1.0, 1.0, 1.0)
            .cdf(-1.0, &AccuracyBudget::default())
            .is_err());
    }

    #[test]
    fn rayleigh_limit() {
        let p = params(1e-12, 1.0, 1.0);
        assert!((p.pdf(1.0).unwrap() - (-1f64).exp()).abs() < 1e-6);
        let cdf = p.cdf(2f64.ln(), &AccuracyBudget::default()).unwrap();
        assert!((cdf - 0.5).abs() < 1e-6);
        // κ = 0 is exact, not a limit.
        let exact = params(0.0, 1.0, 2.0);
        assert!((exact.pdf(1.0).unwrap() - 0.5 * (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn pdf_matches_mixture_oracle() {
        let p = params(1.0, 2.0, 1.0);
        let oracle = mixture_pdf_oracle(&p, 1.0);
        assert!((p.pdf(1.0).unwrap() - oracle).abs() < 1e-13 * oracle);
        for &(k, m, y, g) in &[
            (0.5, 0.5, 0.1, 0.05),
            (3.0, 6.0, 10.0, 14.0),
            (20.0, 1.3, 2.0, 1.9),
        ] {
            let p = params(k, m, y);
            let oracle = mixture_pdf_oracle(&p, g);
            assert!(
                (p.pdf(g).unwrap() - oracle).abs() < 1e-12 * oracle,
                "{p:?} at {g}"
            );
        }
    }

    #[test]
    fn pdf_matches_bessel_form() {
        // μ(1+κ)^{(μ+1)/2} γ^{(μ−1)/2} / (κ^{(μ−1)/2} e^{μκ} ȳ^{(μ+1)/2})
        //   · e^{−μ(1+κ)γ/ȳ} I_{μ−1}(2μ √(κ(1+κ)γ/ȳ))
        for &(k, m, y, g) in &[
            (1.0f64, 2.0f64, 1.0f64, 1.0f64),
            (2.0, 1.5, 3.0, 2.0),
            (0.3, 4.0, 5.0, 7.0),
        ] {
            let bessel =
                crate::specfun::bessel_i(m - 1.0, 2.0 * m * (k * (1.0 + k) * g / y).sqrt())
                    .unwrap();
            let closed = m * (1.0 + k).powf((m + 1.0) / 2.0) * g.powf((m - 1.0) / 2.0)
                / (k.powf((m - 1.0) / 2.0) * (m * k).exp() * y.powf((m + 1.0) / 2.0))
                * (-m * (1.0 + k) * g / y).exp()
                * bessel;
            let got = params(k, m, y).pdf(g).unwrap();
            assert!(
                (got - closed).abs() < 1e-12 * closed,
                "({k},{m},{y}) at {g}"
            );
        }
    }

    #[test]
    fn density_at_origin() {
        assert_eq!(params(1.0, 0.5, 1.0).pdf(0.0).unwrap(), f64::INFINITY);
        assert_eq!(params(1.0, 2.0, 1.0).pdf(0.0).unwrap(), 0.0);
        let p = params(1.0, 1.0, 2.0);
        assert!((p.pdf(0.0).unwrap() - p.rate() * (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn cdf_boundaries() {
        let budget = AccuracyBudget::default();
        for p in [
            params(0.0, 1.0, 1.0),
            params(2.0, 1.5, 3.0),
            params(5.0, 0.4, 0.2),
        ] {
            assert_eq!(p.cdf(0.0, &budget).unwrap(), 0.0);
            assert!(p.cdf(1e4 * p.mean_snr(), &budget).unwrap() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn mrc_composition() {
        let branch = params(1.0, 1.0, 2.0);
        assert_eq!(branch.mrc_composite(1).unwrap(), branch);
        assert_eq!(branch.mrc_composite(3).unwrap(), params(1.0, 3.0, 6.0));
        assert!(branch.mrc_composite(0).is_err());
    }

    #[test]
    fn sampler_is_deterministic() {
        let p = params(1.0, 1.5, 2.0);
        let sampler = p.sampler();
        let a: Vec<f64> = (&sampler)
            .sample_iter(ChaCha8Rng::seed_from_u64(7))
            .take(64)
            .collect();
        let b: Vec<f64> = (&sampler)
            .sample_iter(ChaCha8Rng::seed_from_u64(7))
            .take(64)
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn sampler_is_unbiased() {
        let p = params(0.0, 2.0, 4.0);
        let sampler = p.sampler();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let draws: Vec<f64> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 4.0).abs() < 3.0 * var.sqrt() / 1e3, "mean {mean}");
        assert!((var - p.variance()).abs() < 0.02 * p.variance());
    }
}
