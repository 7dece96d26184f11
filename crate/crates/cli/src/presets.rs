//! Data behind each figure, one wide table per preset: the swept variable in
//! the first column, then one column per curve (plus `<curve>_mc` and
//! `<curve>_mc_stderr` when Monte Carlo is requested). In gnuplot,
//! `plot "fig3a.csv" using 1:2 with lines` draws the first curve.

use rayon::prelude::*;
use swipt_secrecy::montecarlo::{simulate_secrecy_outage, simulate_transmission_probability};
use swipt_secrecy::secrecy::{secrecy_outage, secrecy_throughput};

use crate::config::ConfigDoc;
use crate::error::CliError;
use crate::eval::{provenance, RunOptions};
use crate::table::{fmt_g, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// P_out vs γ̄_s (dB) for Rayleigh, Rician and Nakagami-3 links.
    Fig2,
    /// P_out vs N for two ρ and two M.
    Fig3a,
    /// P_out vs N for three α.
    Fig3b,
    /// P_out vs L for power splitting (α = 0) and time switching (ρ = 1).
    Fig4,
    /// Secrecy throughput vs R_s for two M and two γ̄_s.
    Fig5,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Fig2,
        Preset::Fig3a,
        Preset::Fig3b,
        Preset::Fig4,
        Preset::Fig5,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
        }
    }

    fn quantity(&self) -> Quantity {
        match self {
            Preset::Fig5 => Quantity::Throughput,
            _ => Quantity::POut,
        }
    }

    /// Swept key and its grid.
    pub fn axis(&self) -> (&'static str, Vec<f64>) {
        match self {
            Preset::Fig2 => ("gamma_s_db", (0..=10).map(|i| 2.0 * i as f64).collect()),
            Preset::Fig3a | Preset::Fig3b => ("N", (1..=8).map(f64::from).collect()),
            Preset::Fig4 => ("L", (1..=8).map(f64::from).collect()),
            Preset::Fig5 => ("R_s", (1..=120).map(|i| i as f64 / 10.0).collect()),
        }
    }

    /// Curve names and the keys each one overrides.
    pub fn curves(&self) -> Vec<(String, Vec<(&'static str, f64)>)> {
        match self {
            Preset::Fig2 => {
                let mut out = Vec::new();
                for (name, kappa, mu) in [
                    ("rayleigh", 0.0, 1.0),
                    ("rician", 1.0, 1.0),
                    ("nakagami3", 0.0, 3.0),
                ] {
                    for r_s in [1.0, 2.0] {
                        out.push((
                            format!("{name}_Rs{r_s}"),
                            vec![
                                ("kappa_s", kappa),
                                ("mu_s", mu),
                                ("kappa_e", kappa),
                                ("mu_e", mu),
                                ("R_s", r_s),
                            ],
                        ));
                    }
                }
                out
            }
            Preset::Fig3a => {
                let mut out = Vec::new();
                for rho in [0.3, 0.8] {
                    for m in [1.0, 2.0] {
                        out.push((format!("rho{rho}_M{m}"), vec![("rho", rho), ("M", m)]));
                    }
                }
                out
            }
            Preset::Fig3b => [0.1, 0.3, 0.5]
                .map(|a| (format!("alpha{a}"), vec![("alpha", a)]))
                .to_vec(),
            Preset::Fig4 => {
                let mut out = Vec::new();
                for n in [1.0, 4.0] {
                    out.push((format!("PS_N{n}"), vec![("alpha", 0.0), ("N", n)]));
                    out.push((format!("TS_N{n}"), vec![("rho", 1.0), ("N", n)]));
                }
                out
            }
            Preset::Fig5 => {
                let mut out = Vec::new();
                for m in [1.0, 2.0] {
                    for db in [10.0, 15.0] {
                        out.push((
                            format!("tau_M{m}_{db}dB"),
                            vec![("M", m), ("gamma_s_db", db)],
                        ));
                    }
                }
                out
            }
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown preset {s:?}; expected fig2, fig3a, fig3b, fig4 or fig5"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantity {
    POut,
    Throughput,
}

/// Evaluates every (x, curve) cell on top of `base`. Failed cells are `nan`.
pub fn run_figure_preset(
    preset: Preset,
    base: &ConfigDoc,
    opts: &RunOptions,
) -> Result<Table, CliError> {
    let (axis, xs) = preset.axis();
    let curves = preset.curves();
    let mut cells = Vec::with_capacity(xs.len() * curves.len());
    for &x in &xs {
        for (_, overrides) in &curves {
            let mut doc = base.clone();
            for &(key, value) in overrides {
                doc.set_number(key, value)?;
            }
            doc.set_number(axis, x)?;
            cells.push(doc.resolve()?);
        }
    }
    let quantity = preset.quantity();
    let values: Vec<[f64; 3]> = cells
        .par_iter()
        .map(|(system, numerics)| {
            let analytic = match quantity {
                Quantity::POut => secrecy_outage(system, numerics, opts.method).map(|r| r.p_out),
                Quantity::Throughput => secrecy_throughput(system, numerics),
            }
            .unwrap_or(f64::NAN);
            let (mc, se) = match opts.mc {
                None => (f64::NAN, f64::NAN),
                Some(s) => {
                    let estimate = match quantity {
                        Quantity::POut => simulate_secrecy_outage(system, s.trials, s.seed)
                            .map(|e| (e.p_hat, e.stderr)),
                        Quantity::Throughput => {
                            simulate_transmission_probability(system, s.trials, s.seed).map(|e| {
                                (system.target_rate * e.p_hat, system.target_rate * e.stderr)
                            })
                        }
                    };
                    estimate.unwrap_or((f64::NAN, f64::NAN))
                }
            };
            [analytic, mc, se]
        })
        .collect();

    let mut header = vec![axis.to_string()];
    for (name, _) in &curves {
        header.push(name.clone());
        if opts.mc.is_some() {
            header.push(format!("{name}_mc"));
            header.push(format!("{name}_mc_stderr"));
        }
    }
    let mut table = Table::new(header);
    table.comments = provenance(&format!("figure {}", preset.as_str()), base, opts);
    for (name, overrides) in &curves {
        let set: Vec<String> = overrides.iter().map(|(k, v)| format!("{k}={v}")).collect();
        table
            .comments
            .push(format!("curve {name}: {}", set.join(" ")));
    }
    for (i, &x) in xs.iter().enumerate() {
        let mut row = vec![fmt_g(x)];
        for v in &values[i * curves.len()..(i + 1) * curves.len()] {
            row.push(fmt_g(v[0]));
            if opts.mc.is_some() {
                row.push(fmt_g(v[1]));
                row.push(fmt_g(v[2]));
            }
        }
        table.push_row(row);
    }
    Ok(table)
}
