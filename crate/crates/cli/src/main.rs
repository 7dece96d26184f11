use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swipt_secrecy::montecarlo::{simulate_secrecy_outage, simulate_transmission_probability};
use swipt_secrecy::Method;
use swipt_secrecy_cli::eval::{parse_values, provenance};
use swipt_secrecy_cli::table::fmt_g;
use swipt_secrecy_cli::{
    run_analyze, run_figure_preset, run_sweep, run_validate, CliError, ConfigDoc, McSettings,
    Output, Preset, RunOptions, SweepSpec, Table,
};

/// Secrecy outage and throughput of a SWIPT downlink with antenna selection
/// and cooperating power-splitting eavesdroppers over κ-μ fading.
///
/// Configuration precedence: --set flags > --config file > defaults.
/// Exit codes: 0 success, 1 validation FAIL or evaluation failure, 2 usage or
/// config error.
#[derive(Debug, Parser)]
#[command(name = "swipt-secrecy", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON config file with flat keys (L, M, N, rho, alpha, R_s, gamma_s_db, ...).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override one config key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Monte Carlo trials. Enables MC columns for analyze, sweep and figure.
    #[arg(long, global = true, value_name = "N")]
    trials: Option<u64>,

    #[arg(long, global = true, value_name = "U64", default_value_t = 1)]
    seed: u64,

    /// Write CSV here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_parser = parse_method, default_value = "quadrature")]
    method: Method,

    /// Figure preset: fig2, fig3a, fig3b, fig4 or fig5.
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one configuration.
    Analyze,
    /// Vary one key over a list (`0,5,10`) or inclusive range (`1:8:1`).
    Sweep {
        parameter: String,
        values: String,
        /// Comma-separated subset of p_out_analytic, p_out_mc, p_t, throughput, p_eve.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "p_out_analytic,p_eve,p_t,throughput"
        )]
        outputs: Vec<String>,
    },
    /// Simulate P_out and P_t (default 1e6 trials).
    Mc,
    /// Compare evaluators and Monte Carlo (default 1e5 trials); exit 1 on FAIL.
    Validate,
    /// Emit the data behind a figure.
    Figure { name: Option<String> },
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: swipt_secrecy::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load(cli: &Cli) -> Result<ConfigDoc, CliError> {
    let mut doc = ConfigDoc::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        doc.merge_json(&text)?;
    }
    for assignment in &cli.set {
        doc.set_assignment(assignment)?;
    }
    doc.resolve()?;
    Ok(doc)
}

fn emit(cli: &Cli, table: &Table) -> Result<(), CliError> {
    let text = table.to_string();
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let doc = load(cli)?;
    let opts = RunOptions {
        method: cli.method,
        mc: cli.trials.map(|trials| McSettings {
            trials,
            seed: cli.seed,
        }),
    };
    match &cli.command {
        Command::Analyze => emit(cli, &run_analyze(&doc, &opts)?)?,
        Command::Sweep {
            parameter,
            values,
            outputs,
        } => {
            let outputs = outputs
                .iter()
                .map(|o| o.parse())
                .collect::<Result<Vec<Output>, _>>()?;
            let spec = SweepSpec::new(parameter, parse_values(values)?, outputs)?;
            emit(cli, &run_sweep(&doc, &opts, &spec)?)?;
        }
        Command::Mc => {
            let opts = RunOptions {
                mc: Some(McSettings {
                    trials: cli.trials.unwrap_or(1_000_000),
                    seed: cli.seed,
                }),
                ..opts
            };
            let s = opts.mc.unwrap();
            let (system, _) = doc.resolve()?;
            let out = simulate_secrecy_outage(&system, s.trials, s.seed)?;
            let pt = simulate_transmission_probability(&system, s.trials, s.seed)?;
            let mut t = Table::new([
                "quantity",
                "p_hat",
                "stderr",
                "ci_low",
                "ci_high",
                "successes",
                "n_trials",
            ]);
            t.comments = provenance("mc", &doc, &opts);
            for (name, e) in [("p_out", out), ("p_t", pt)] {
                let mut row = vec![name.to_string()];
                row.extend([e.p_hat, e.stderr, e.ci_low, e.ci_high].map(fmt_g));
                row.extend([e.successes.to_string(), e.n_trials.to_string()]);
                t.push_row(row);
            }
            emit(cli, &t)?;
        }
        Command::Validate => {
            let trials = cli.trials.unwrap_or(100_000);
            let (system, numerics) = doc.resolve()?;
            let report = run_validate(&system, &numerics, trials, cli.seed)?;
            let mut t = report.to_table();
            let opts = RunOptions {
                mc: Some(McSettings {
                    trials,
                    seed: cli.seed,
                }),
                ..opts
            };
            let mut comments = provenance("validate", &doc, &opts);
            comments.append(&mut t.comments);
            t.comments = comments;
            emit(cli, &t)?;
            if !report.passed() {
                return Ok(1);
            }
        }
        Command::Figure { name } => {
            let name = match (name, &cli.preset) {
                (Some(a), Some(b)) if a != b => {
                    return Err(CliError::Usage(format!(
                        "conflicting presets {a:?} and {b:?}"
                    )))
                }
                (Some(n), _) | (None, Some(n)) => n,
                (None, None) => return Err(CliError::Usage("figure needs a preset name".into())),
            };
            let preset: Preset = name.parse()?;
            emit(cli, &run_figure_preset(preset, &doc, &opts)?)?;
        }
    }
    Ok(0)
}
