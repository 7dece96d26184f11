//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line per criterion, and exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use swipt_secrecy::fading::sample;
use swipt_secrecy::montecarlo::{simulate_secrecy_outage, simulate_secrecy_outage_with, McOptions};
use swipt_secrecy::quadrature::{integrate, QuadratureOptions};
use swipt_secrecy::secrecy::{
    p_eve_quadrature, p_eve_series, secrecy_outage, secrecy_throughput, transmission_probability,
    Method, NumericsConfig, SystemConfig,
};
use swipt_secrecy::specfun::{bessel_i, marcum_q, reg_gamma_pair};
use swipt_secrecy::{db_to_linear, AccuracyBudget, KappaMuParams};
use swipt_secrecy_cli::{run_validate, Preset};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn numerics() -> NumericsConfig {
    NumericsConfig::default()
}

fn p_out(c: &SystemConfig) -> f64 {
    secrecy_outage(c, &numerics(), Method::Quadrature)
        .unwrap()
        .p_out
}

/// L ∈ {1,2} × M ∈ {1,2} × N ∈ {1,3} × (ρ, α) ∈ {(0.5, 0), (1, 0.5)}.
fn grid() -> Vec<SystemConfig> {
    let mut out = Vec::new();
    for l in [1, 2] {
        for m in [1, 2] {
            for n in [1, 3] {
                for (rho, alpha) in [(0.5, 0.0), (1.0, 0.5)] {
                    out.push(SystemConfig {
                        ap_antennas: l,
                        rx_antennas: m,
                        eavesdroppers: n,
                        rho,
                        alpha,
                        ..Default::default()
                    });
                }
            }
        }
    }
    out
}

fn label(c: &SystemConfig) -> String {
    format!(
        "L={} M={} N={} rho={} alpha={}",
        c.ap_antennas, c.rx_antennas, c.eavesdroppers, c.rho, c.alpha
    )
}

fn analytic_vs_mc() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut misses = Vec::new();
    for (i, c) in grid().iter().enumerate() {
        let analytic = p_out(c);
        let mc = simulate_secrecy_outage(c, 100_000, 1_000 + i as u64).unwrap();
        let tol = 0.01_f64.max(4.0 * mc.stderr);
        let ratio = (analytic - mc.p_hat).abs() / tol;
        worst = worst.max(ratio);
        if ratio > 1.0 {
            misses.push(format!("{}: {analytic:.6} vs {:.6}", label(c), mc.p_hat));
        }
    }
    let detail = format!("16 configs, 1e5 trials each, worst |diff|/tol {worst:.3}");
    if misses.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; misses: {}", misses.join("; ")))
    }
}

fn series_vs_quadrature() -> Outcome {
    let mut configs = vec![SystemConfig::default()];
    configs.extend(grid());
    let mut worst: f64 = 0.0;
    let mut misses = Vec::new();
    for c in &configs {
        let q = p_eve_quadrature(c, &numerics()).unwrap().value;
        let s = p_eve_series(c, &numerics()).unwrap().value;
        let rel = ((s - q) / q).abs();
        worst = worst.max(rel);
        if rel > 1e-6 {
            misses.push(format!(
                "{}: series {s:e}, quadrature {q:e} (authoritative)",
                label(c)
            ));
        }
    }
    let detail = format!("defaults + 16 grid configs, worst relative delta {worst:.2e} (tol 1e-6)");
    if misses.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {}", misses.join("; ")))
    }
}

fn degenerate_identities() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for base in grid() {
        for c in [
            SystemConfig { rho: 0.0, ..base },
            SystemConfig { alpha: 1.0, ..base },
        ] {
            let complement = 1.0 - transmission_probability(&c, &numerics()).unwrap();
            worst = worst.max((p_out(&c) - complement).abs());
            count += 1;
        }
    }
    let detail = format!(
        "{count} configs with rho=0 or alpha=1, worst |P_out - (1 - P_t)| {worst:.2e} (tol 1e-9)"
    );
    if worst <= 1e-9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// ∫₀^x g via γ = u², which removes the γ^{μ−1} endpoint singularity.
fn integrate_from_zero(g: impl Fn(f64) -> f64, x: f64) -> f64 {
    let opts = QuadratureOptions {
        rel_tol: 1e-13,
        abs_tol: 1e-15,
        max_intervals: 10_000,
        initial_pieces: 16,
    };
    integrate(|u| 2.0 * u * g(u * u), 0.0, x.sqrt(), &opts)
        .unwrap()
        .value
}

/// Rician amplitude CDF ∫₀^b r e^{−(r²+a²)/2} I₀(ar) dr with I₀ from its
/// power series, i.e. 1 − Q₁(a, b).
fn rician_cdf(a: f64, b: f64) -> f64 {
    let i0 = |x: f64| {
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..400 {
            term *= (x / 2.0) * (x / 2.0) / (k as f64 * k as f64);
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        sum
    };
    let opts = QuadratureOptions {
        rel_tol: 1e-12,
        abs_tol: 1e-15,
        ..Default::default()
    };
    integrate(
        |r| r * (-(r * r + a * a) / 2.0).exp() * i0(a * r),
        0.0,
        b,
        &opts,
    )
    .unwrap()
    .value
}

fn distribution_correctness() -> Outcome {
    let budget = AccuracyBudget::default();
    let mut norm_worst: f64 = 0.0;
    let mut cdf_worst: f64 = 0.0;
    for kappa in [0.0, 0.5, 1.0, 3.0] {
        for mu in [0.5, 1.0, 2.0, 6.0] {
            for mean in [0.1, 1.0, 10.0] {
                let p = KappaMuParams::new(kappa, mu, mean).unwrap();
                let total = integrate_from_zero(|g| p.pdf(g).unwrap(), 200.0 * mean);
                norm_worst = norm_worst.max((total - 1.0).abs());
                for frac in [0.05, 0.7, 1.0, 2.5] {
                    let x = frac * mean;
                    let integral = integrate_from_zero(|g| p.pdf(g).unwrap(), x);
                    cdf_worst = cdf_worst.max((p.cdf(x, &budget).unwrap() - integral).abs());
                }
            }
        }
    }
    let mut reduction_worst: f64 = 0.0;
    for mean in [0.1, 1.0, 10.0] {
        let rayleigh = KappaMuParams::new(0.0, 1.0, mean).unwrap();
        let rician = KappaMuParams::new(1.0, 1.0, mean).unwrap();
        let nakagami = KappaMuParams::new(0.0, 3.0, mean).unwrap();
        for frac in [0.01, 0.3, 1.0, 2.0, 5.0] {
            let x = frac * mean;
            let k: f64 = 1.0;
            let oracles = [
                (rayleigh, 1.0 - (-x / mean).exp()),
                (
                    rician,
                    rician_cdf((2.0 * k).sqrt(), (2.0 * (k + 1.0) * x / mean).sqrt()),
                ),
                (
                    nakagami,
                    statrs::function::gamma::gamma_lr(3.0, 3.0 * x / mean),
                ),
            ];
            for (p, oracle) in oracles {
                reduction_worst = reduction_worst.max((p.cdf(x, &budget).unwrap() - oracle).abs());
            }
        }
    }
    let detail = format!(
        "48-point grid: normalization {norm_worst:.1e}, cdf vs integrated pdf {cdf_worst:.1e} (tol 1e-8); \
         Rayleigh/Rician/Nakagami-3 {reduction_worst:.1e} (tol 1e-6)"
    );
    if norm_worst <= 1e-8 && cdf_worst <= 1e-8 && reduction_worst <= 1e-6 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn special_functions() -> Outcome {
    let budget = AccuracyBudget::default();
    let mut q_zero_b: f64 = 0.0;
    for mu in [0.5, 1.0, 2.5, 7.0] {
        for a in [0.0, 0.5, 3.0, 10.0] {
            q_zero_b = q_zero_b.max((marcum_q(mu, a, 0.0, &budget).unwrap() - 1.0).abs());
        }
    }
    let mut q_zero_a: f64 = 0.0;
    for b in [0.01, 0.5, 1.0, 2.0, 4.0, 8.0] {
        q_zero_a =
            q_zero_a.max((marcum_q(1.0, 0.0, b, &budget).unwrap() - (-b * b / 2.0).exp()).abs());
    }
    let mut recurrence: f64 = 0.0;
    for nu in [1.0, 1.5, 2.3, 10.0] {
        for x in [0.1, 1.0, 5.0, 30.0, 200.0] {
            let lhs = bessel_i(nu - 1.0, x).unwrap() - bessel_i(nu + 1.0, x).unwrap();
            let rhs = 2.0 * nu / x * bessel_i(nu, x).unwrap();
            recurrence = recurrence.max(((lhs - rhs) / rhs).abs());
        }
    }
    let mut complement: f64 = 0.0;
    for a in [0.1, 0.5, 1.0, 3.7, 20.0, 150.0] {
        for x in [0.01, 0.5, 1.0, 3.0, 20.0, 100.0, 300.0] {
            let g = reg_gamma_pair(a, x).unwrap();
            complement = complement.max((g.lower + g.upper - 1.0).abs());
        }
    }
    let detail = format!(
        "Q_mu(a,0)=1 {q_zero_b:.1e}, Q_1(0,b)=exp(-b^2/2) {q_zero_a:.1e} (tol 1e-10); \
         Bessel recurrence {recurrence:.1e} (tol 1e-8); P+Q=1 {complement:.1e} (tol 1e-12)"
    );
    if q_zero_b <= 1e-10 && q_zero_a <= 1e-10 && recurrence <= 1e-8 && complement <= 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sampler_validity() -> Outcome {
    const DRAWS: usize = 100_000;
    // Kolmogorov asymptotic critical value at significance 0.01.
    let critical = 1.628 / (DRAWS as f64).sqrt();
    let budget = AccuracyBudget::default();
    let points = [
        (0.0, 0.5, 1.0),
        (0.0, 1.0, 1.0),
        (0.5, 2.0, 0.1),
        (1.0, 1.0, 10.0),
        (1.0, 0.5, 1.0),
        (3.0, 6.0, 1.0),
        (3.0, 1.0, 10.0),
        (0.5, 0.5, 10.0),
        (1.0, 3.0, 0.1),
        (6.0, 2.0, 1.0),
    ];
    let mut passed = 0;
    let mut stats = Vec::new();
    for (seed, &(kappa, mu, mean)) in points.iter().enumerate() {
        let p = KappaMuParams::new(kappa, mu, mean).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed as u64 + 1);
        let mut xs: Vec<f64> = (0..DRAWS).map(|_| sample(&p, &mut rng)).collect();
        xs.sort_by(f64::total_cmp);
        let n = DRAWS as f64;
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = p.cdf(x, &budget).unwrap();
                ((i + 1) as f64 / n - f).max(f - i as f64 / n)
            })
            .fold(0.0, f64::max);
        if d < critical {
            passed += 1;
        }
        stats.push(d * n.sqrt());
    }
    let worst = stats.iter().cloned().fold(0.0, f64::max);
    let detail = format!(
        "{passed}/10 grid points pass KS at 0.01 (seeds 1..10, 1e5 draws), max sqrt(n)*D {worst:.3} vs 1.628"
    );
    if passed >= 9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Sign of each discrete difference, ignoring steps within `slack`.
fn signs(v: &[f64], slack: f64) -> Vec<i8> {
    v.windows(2)
        .filter_map(|w| {
            let d = w[1] - w[0];
            if d > slack {
                Some(1)
            } else if d < -slack {
                Some(-1)
            } else {
                None
            }
        })
        .collect()
}

fn single_interior_maximum(v: &[f64]) -> bool {
    let s = signs(v, 1e-12);
    let turns = s.windows(2).filter(|w| w[0] != w[1]).count();
    s.first() == Some(&1) && s.last() == Some(&-1) && turns == 1
}

fn fig5_curve(m: usize, gamma_s_db: f64) -> (Vec<f64>, Vec<f64>) {
    let (_, rates) = Preset::Fig5.axis();
    let tau = rates
        .iter()
        .map(|&r| {
            let c = SystemConfig {
                target_rate: r,
                rx_antennas: m,
                main_branch: KappaMuParams::new(1.0, 1.0, db_to_linear(gamma_s_db)).unwrap(),
                ..Default::default()
            };
            secrecy_throughput(&c, &numerics()).unwrap()
        })
        .collect();
    (rates, tau)
}

fn trend_suite() -> Outcome {
    let slack = 1e-12;
    let series = |f: &dyn Fn(f64) -> SystemConfig, xs: &[f64]| -> Vec<f64> {
        xs.iter().map(|&x| p_out(&f(x))).collect()
    };
    let base = SystemConfig::default();
    let tenths: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let counts: Vec<f64> = (1..=8).map(f64::from).collect();
    let mut failures = Vec::new();
    let mut check = |name: &str, v: Vec<f64>, increasing: bool| {
        let ok = v.windows(2).all(|w| {
            if increasing {
                w[1] >= w[0] - slack
            } else {
                w[1] <= w[0] + slack
            }
        });
        if !ok {
            failures.push(format!("{name}: {v:?}"));
        }
    };
    for n_base in [1, 3] {
        let b = SystemConfig {
            eavesdroppers: n_base,
            ..base
        };
        check(
            "N",
            series(
                &|x| SystemConfig {
                    eavesdroppers: x as usize,
                    ..b
                },
                &counts,
            ),
            true,
        );
        check(
            "rho",
            series(&|x| SystemConfig { rho: x, ..b }, &tenths),
            true,
        );
        check(
            "alpha",
            series(&|x| SystemConfig { alpha: x, ..b }, &tenths),
            false,
        );
        check(
            "M",
            series(
                &|x| SystemConfig {
                    rx_antennas: x as usize,
                    ..b
                },
                &counts[..6],
            ),
            false,
        );
        check(
            "L",
            series(
                &|x| SystemConfig {
                    ap_antennas: x as usize,
                    ..b
                },
                &counts[..6],
            ),
            false,
        );
    }
    let mut argmax = Vec::new();
    for m in [1, 2] {
        let mut per_snr = Vec::new();
        for db in [10.0, 15.0] {
            let (rates, tau) = fig5_curve(m, db);
            if !single_interior_maximum(&tau) {
                failures.push(format!("tau not unimodal at M={m}, {db} dB"));
            }
            let i = (0..tau.len())
                .max_by(|&a, &b| tau[a].total_cmp(&tau[b]))
                .unwrap();
            per_snr.push(rates[i]);
        }
        if per_snr[1] <= per_snr[0] {
            failures.push(format!("argmax did not move right at M={m}: {per_snr:?}"));
        }
        argmax.push(format!("M={m}: R*={}->{}", per_snr[0], per_snr[1]));
    }
    let detail = format!(
        "P_out monotone in N, rho, alpha, M, L (N base 1 and 3); tau unimodal on the 0.1..12 grid; {}",
        argmax.join(", ")
    );
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {}", failures.join("; ")))
    }
}

fn truncation_claim() -> Outcome {
    let c = SystemConfig::default();
    let adaptive = secrecy_outage(&c, &numerics(), Method::Series).unwrap();
    let fixed = NumericsConfig {
        fixed_terms: Some(10),
        ..numerics()
    };
    let ten = secrecy_outage(&c, &fixed, Method::Series).unwrap();
    let delta = (ten.p_out - adaptive.p_out).abs();
    let report = run_validate(&c, &numerics(), 10_000, 1).unwrap();
    let recorded = report.check("fixed_10_terms").unwrap().delta;
    let terms = adaptive.terms_used.map_or((0, 0), |t| (t.t, t.v));
    let detail = format!(
        "|P_out(10 terms) - P_out(adaptive, {} x {} terms)| = {delta:.2e} (tol 1e-6); validation report records {recorded:.2e}",
        terms.0, terms.1
    );
    if delta <= 1e-6 && recorded == delta {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_swipt-secrecy");
    let runs: [&[&str]; 2] = [
        &[
            "sweep",
            "gamma_s_db",
            "0:20:5",
            "--outputs",
            "p_out_analytic,p_out_mc,p_t",
            "--trials",
            "20000",
            "--seed",
            "5",
        ],
        &["figure", "fig3b", "--trials", "10000", "--seed", "6"],
    ];
    for args in runs {
        let a = Command::new(bin).args(args).output().unwrap();
        let b = Command::new(bin).args(args).output().unwrap();
        if !a.status.success() || a.stdout != b.stdout || a.stdout.is_empty() {
            return Err(format!("CSV differs between runs of {args:?}"));
        }
    }
    let c = SystemConfig {
        ap_antennas: 2,
        rx_antennas: 2,
        eavesdroppers: 3,
        ..Default::default()
    };
    let opts = McOptions::default();
    let estimates: Vec<_> = [1, 2, 8]
        .iter()
        .map(|&threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate_secrecy_outage_with(&c, 300_001, 42, &opts).unwrap())
        })
        .collect();
    if estimates.windows(2).any(|w| w[0] != w[1]) {
        return Err(format!("MC differs across worker counts: {estimates:?}"));
    }
    Ok(format!(
        "byte-identical CSV for sweep and figure runs; MC identical on 1, 2, 8 workers (p_hat {})",
        estimates[0].p_hat
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("analytic vs Monte Carlo grid", analytic_vs_mc),
        ("series/quadrature equivalence", series_vs_quadrature),
        ("degenerate identities", degenerate_identities),
        ("distribution correctness", distribution_correctness),
        ("special functions", special_functions),
        ("sampler validity", sampler_validity),
        ("trend suite", trend_suite),
        ("truncation claim", truncation_claim),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {status}: {name}: {detail}", i + 1);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
