//! Seeded Monte Carlo estimation of the secrecy outage and transmission
//! probabilities.
//!
//! Trials are split into fixed-size chunks; chunk `i` draws from a ChaCha8
//! stream keyed by `(seed, i)`, so an estimate depends only on
//! `(config, n_trials, seed, chunk_size)` and not on how many worker threads
//! run the chunks. Plain indicator means, no variance reduction: probabilities
//! far below 1/n_trials are only checked analytically.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fading::KappaMuSampler;
use crate::secrecy::SystemConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub p_hat: f64,
    /// √(p̂(1 − p̂)/n).
    pub stderr: f64,
    pub n_trials: u64,
    pub successes: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl McEstimate {
    fn from_counts(successes: u64, n_trials: u64, seed: u64, z: f64) -> Result<Self> {
        let (ci_low, ci_high) = wilson_interval(successes, n_trials, z)?;
        let p_hat = successes as f64 / n_trials as f64;
        Ok(McEstimate {
            p_hat,
            stderr: (p_hat * (1.0 - p_hat) / n_trials as f64).sqrt(),
            n_trials,
            successes,
            ci_low,
            ci_high,
            seed,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    /// Trials per independent random stream.
    pub chunk_size: u64,
    /// Normal quantile for the Wilson interval.
    pub z: f64,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions {
            chunk_size: 1 << 14,
            z: 1.96,
        }
    }
}

/// Wilson score interval for `successes` out of `n`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::domain("wilson_interval", "requires n >= 1"));
    }
    if successes > n {
        return Err(Error::domain(
            "wilson_interval",
            format!("successes {successes} exceed n {n}"),
        ));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(
            "wilson_interval",
            format!("requires z > 0, got {z}"),
        ));
    }
    let n_f = n as f64;
    let p = successes as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let center = (p + z2 / (2.0 * n_f)) / denom;
    let half = z / denom * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt();
    let low = if successes == 0 {
        0.0
    } else {
        (center - half).clamp(0.0, p)
    };
    let high = if successes == n {
        1.0
    } else {
        (center + half).clamp(p, 1.0)
    };
    Ok((low, high))
}

/// Per-scenario samplers shared read-only by all chunks.
struct Scenario {
    main_branch: KappaMuSampler,
    eaves: Option<KappaMuSampler>,
    rx_antennas: usize,
    ap_antennas: usize,
    eavesdroppers: usize,
    target_rate: f64,
    wiretap_share: f64,
}

impl Scenario {
    fn new(config: &SystemConfig) -> Result<Self> {
        config.validate()?;
        let eaves = config.eaves_effective()?.map(|p| p.sampler());
        Ok(Scenario {
            main_branch: config.main_per_branch()?.sampler(),
            eaves,
            rx_antennas: config.rx_antennas,
            ap_antennas: config.ap_antennas,
            eavesdroppers: config.eavesdroppers,
            target_rate: config.target_rate,
            wiretap_share: 1.0 - config.alpha,
        })
    }

    /// MRC output SNR: sum of M independent branch SNRs.
    fn main_snr(&self, rng: &mut ChaCha8Rng) -> f64 {
        (0..self.rx_antennas)
            .map(|_| self.main_branch.sample(rng))
            .sum()
    }

    /// Strongest of the N eavesdroppers for one transmit antenna.
    fn best_eaves_snr(&self, rng: &mut ChaCha8Rng) -> f64 {
        match &self.eaves {
            Some(s) => (0..self.eavesdroppers)
                .map(|_| s.sample(rng))
                .fold(0.0, f64::max),
            None => 0.0,
        }
    }

    /// True when max_l max(C_s^l − (1−α) log₂(1 + max_i γ_ie^l), 0) < R_s.
    fn outage_trial(&self, rng: &mut ChaCha8Rng) -> bool {
        let mut best = f64::NEG_INFINITY;
        for _ in 0..self.ap_antennas {
            let c_s = self.main_snr(rng).ln_1p();
            let c_e = self.wiretap_share * self.best_eaves_snr(rng).ln_1p();
            best = best.max(c_s - c_e);
        }
        best / std::f64::consts::LN_2 < self.target_rate
    }

    /// True when max_l log₂(1 + γ_s^l) > R_s.
    fn transmission_trial(&self, rng: &mut ChaCha8Rng) -> bool {
        let best = (0..self.ap_antennas)
            .map(|_| self.main_snr(rng))
            .fold(0.0, f64::max);
        best.ln_1p() / std::f64::consts::LN_2 > self.target_rate
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn count_parallel<F>(n_trials: u64, seed: u64, opts: &McOptions, trial: F) -> Result<u64>
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    if n_trials == 0 {
        return Err(Error::domain("monte_carlo", "n_trials must be at least 1"));
    }
    if opts.chunk_size == 0 {
        return Err(Error::domain(
            "monte_carlo",
            "chunk_size must be at least 1",
        ));
    }
    let chunks = n_trials.div_ceil(opts.chunk_size);
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = opts.chunk_size.min(n_trials - c * opts.chunk_size);
            let mut rng = chunk_rng(seed, c);
            (0..len).filter(|_| trial(&mut rng)).count() as u64
        })
        .sum())
}

pub fn simulate_secrecy_outage(
    config: &SystemConfig,
    n_trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    simulate_secrecy_outage_with(config, n_trials, seed, &McOptions::default())
}

pub fn simulate_secrecy_outage_with(
    config: &SystemConfig,
    n_trials: u64,
    seed: u64,
    opts: &McOptions,
) -> Result<McEstimate> {
    let scenario = Scenario::new(config)?;
    let hits = count_parallel(n_trials, seed, opts, |rng| scenario.outage_trial(rng))?;
    McEstimate::from_counts(hits, n_trials, seed, opts.z)
}

pub fn simulate_transmission_probability(
    config: &SystemConfig,
    n_trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    simulate_transmission_probability_with(config, n_trials, seed, &McOptions::default())
}

pub fn simulate_transmission_probability_with(
    config: &SystemConfig,
    n_trials: u64,
    seed: u64,
    opts: &McOptions,
) -> Result<McEstimate> {
    let scenario = Scenario::new(config)?;
    let hits = count_parallel(n_trials, seed, opts, |rng| scenario.transmission_trial(rng))?;
    McEstimate::from_counts(hits, n_trials, seed, opts.z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wilson_edges() {
        let (low, _) = wilson_interval(0, 50, 1.96).unwrap();
        assert_eq!(low, 0.0);
        let (_, high) = wilson_interval(50, 50, 1.96).unwrap();
        assert_eq!(high, 1.0);
        assert!(wilson_interval(1, 0, 1.96).is_err());
        assert!(wilson_interval(5, 4, 1.96).is_err());
        assert!(wilson_interval(1, 4, 0.0).is_err());
    }

    #[test]
    fn wilson_direct_formula() {
        // p = 0.5, n = 100, z = 1.96: center 0.5, half-width
        // 1.96/(1 + 0.038416) · √(0.0025 + 0.000096040) = 0.0961685...
        let (low, high) = wilson_interval(50, 100, 1.96).unwrap();
        let half = 1.96 / 1.038_416 * (0.0025f64 + 0.000_096_04).sqrt();
        assert!((low - (0.5 - half)).abs() < 1e-15);
        assert!((high - (0.5 + half)).abs() < 1e-15);
        assert!((low - 0.403_829_828_590_147).abs() < 1e-14);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(simulate_secrecy_outage(&SystemConfig::default(), 0, 1).is_err());
        assert!(simulate_transmission_probability(&SystemConfig::default(), 0, 1).is_err());
    }

    #[test]
    fn repeated_runs_are_identical() {
        let c = SystemConfig {
            ap_antennas: 2,
            eavesdroppers: 2,
            ..Default::default()
        };
        let a = simulate_secrecy_outage(&c, 50_000, 42).unwrap();
        let b = simulate_secrecy_outage(&c, 50_000, 42).unwrap();
        assert_eq!(a, b);
        let other = simulate_secrecy_outage(&c, 50_000, 43).unwrap();
        assert_ne!(a.successes, other.successes);
    }

    #[test]
    fn partial_last_chunk_counts_exactly() {
        let c = SystemConfig {
            target_rate: 1e-12,
            ..Default::default()
        };
        let opts = McOptions {
            chunk_size: 1000,
            ..Default::default()
        };
        let e = simulate_transmission_probability_with(&c, 2_345, 9, &opts).unwrap();
        assert_eq!(e.n_trials, 2_345);
        assert_eq!(e.successes, 2_345);
        assert_eq!(e.p_hat, 1.0);
    }

    proptest! {
        #[test]
        fn wilson_contains_point_estimate(n in 1u64..100_000, frac in 0.0f64..=1.0, z in 0.5f64..4.0) {
            let k = ((n as f64) * frac).floor() as u64;
            let (low, high) = wilson_interval(k, n, z).unwrap();
            let p = k as f64 / n as f64;
            prop_assert!(0.0 <= low && low <= p && p <= high && high <= 1.0);
        }
    }
}
