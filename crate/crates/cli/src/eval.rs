//! Point evaluation, `analyze` and parameter sweeps.

use rayon::prelude::*;
use swipt_secrecy::montecarlo::simulate_secrecy_outage;
use swipt_secrecy::secrecy::{
    secrecy_outage, secrecy_throughput, transmission_probability, Method, NumericsConfig,
    SystemConfig,
};
use swipt_secrecy::{db_to_linear, Error, McEstimate, OutageResult};

use crate::config::ConfigDoc;
use crate::error::CliError;
use crate::table::{fmt_g, Table};

/// Monte Carlo settings shared by every point of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSettings {
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub method: Method,
    pub mc: Option<McSettings>,
}

/// Everything computed at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub outage: OutageResult,
    pub p_t: f64,
    pub throughput: f64,
    pub mc: Option<McEstimate>,
}

pub fn evaluate(
    system: &SystemConfig,
    numerics: &NumericsConfig,
    opts: &RunOptions,
) -> Result<Point, Error> {
    let outage = secrecy_outage(system, numerics, opts.method)?;
    let p_t = transmission_probability(system, numerics)?;
    let throughput = secrecy_throughput(system, numerics)?;
    let mc = opts
        .mc
        .map(|s| simulate_secrecy_outage(system, s.trials, s.seed))
        .transpose()?;
    Ok(Point {
        outage,
        p_t,
        throughput,
        mc,
    })
}

/// Quantities a sweep can report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    POutAnalytic,
    POutMc,
    PT,
    Throughput,
    PEve,
}

impl Output {
    pub const ALL: [Output; 5] = [
        Output::POutAnalytic,
        Output::POutMc,
        Output::PT,
        Output::Throughput,
        Output::PEve,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Output::POutAnalytic => "p_out_analytic",
            Output::POutMc => "p_out_mc",
            Output::PT => "p_t",
            Output::Throughput => "throughput",
            Output::PEve => "p_eve",
        }
    }

    fn columns(&self) -> &'static [&'static str] {
        match self {
            Output::POutAnalytic => &["p_out"],
            Output::POutMc => &["p_out_mc", "p_out_mc_stderr"],
            Output::PT => &["p_t"],
            Output::Throughput => &["throughput"],
            Output::PEve => &["p_eve"],
        }
    }

    fn cells(&self, p: &Point) -> Vec<String> {
        match self {
            Output::POutAnalytic => vec![fmt_g(p.outage.p_out)],
            Output::POutMc => match &p.mc {
                Some(e) => vec![fmt_g(e.p_hat), fmt_g(e.stderr)],
                None => vec![fmt_g(f64::NAN); 2],
            },
            Output::PT => vec![fmt_g(p.p_t)],
            Output::Throughput => vec![fmt_g(p.throughput)],
            Output::PEve => vec![fmt_g(p.outage.p_eve)],
        }
    }
}

impl std::str::FromStr for Output {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Output::ALL
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown output {s:?}")))
    }
}

/// Keys a sweep may vary.
pub const SWEEPABLE: &[&str] = &[
    "L",
    "M",
    "N",
    "rho",
    "alpha",
    "R_s",
    "sigma2_over_N0",
    "gamma_s_db",
    "gamma_e_db",
    "PL_s_db",
    "PL_e_db",
    "kappa_s",
    "mu_s",
    "kappa_e",
    "mu_e",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: String,
    pub values: Vec<f64>,
    pub outputs: Vec<Output>,
}

impl SweepSpec {
    pub fn new(parameter: &str, values: Vec<f64>, outputs: Vec<Output>) -> Result<Self, CliError> {
        if !SWEEPABLE.contains(&parameter) {
            return Err(CliError::Usage(format!(
                "cannot sweep {parameter:?}; sweepable keys: {}",
                SWEEPABLE.join(", ")
            )));
        }
        if values.is_empty() {
            return Err(CliError::Usage("sweep needs at least one value".into()));
        }
        if outputs.is_empty() {
            return Err(CliError::Usage("sweep needs at least one output".into()));
        }
        Ok(SweepSpec {
            parameter: parameter.to_string(),
            values,
            outputs,
        })
    }
}

/// Parses `a,b,c` or an inclusive range `start:stop:step`.
pub fn parse_values(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("cannot parse values {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 3 {
        let [start, stop, step] = [parts[0], parts[1], parts[2]].map(|p| p.trim().parse::<f64>());
        let (start, stop, step) = (
            start.map_err(|_| bad())?,
            stop.map_err(|_| bad())?,
            step.map_err(|_| bad())?,
        );
        if !(step > 0.0) || !(stop >= start) {
            return Err(bad());
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| start + i as f64 * step).collect());
    }
    spec.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
        .collect()
}

/// Short tag written in the `status` column when a row fails.
pub fn error_tag(e: &Error) -> &'static str {
    match e {
        Error::Domain { .. } => "error:domain",
        Error::InvalidParameter { .. } => "error:invalid",
        Error::Convergence { .. } => "error:convergence",
        Error::Quadrature { .. } => "error:quadrature",
    }
}

const DIAGNOSTICS: [&str; 4] = ["terms_t", "terms_v", "quad_error", "status"];

fn diagnostics(p: &Result<Point, Error>) -> Vec<String> {
    match p {
        Ok(p) => {
            let (t, v) = p
                .outage
                .terms_used
                .map_or(("".to_string(), "".to_string()), |t| {
                    (t.t.to_string(), t.v.to_string())
                });
            let q = fmt_g(p.outage.quad_error_estimate);
            vec![t, v, q, "ok".into()]
        }
        Err(e) => vec![
            String::new(),
            String::new(),
            String::new(),
            error_tag(e).into(),
        ],
    }
}

/// Echo of the resolved inputs, written ahead of every table.
pub fn provenance(command: &str, doc: &ConfigDoc, opts: &RunOptions) -> Vec<String> {
    let mut lines = vec![
        format!("swipt-secrecy {command}"),
        format!("config: {}", doc.to_json()),
        format!("method: {}", opts.method.as_str()),
    ];
    if let Some(mc) = opts.mc {
        lines.push(format!("mc_trials: {}", mc.trials));
        lines.push(format!("mc_seed: {}", mc.seed));
    }
    lines
}

/// One row with every analytic output, plus MC columns when requested.
pub fn run_analyze(doc: &ConfigDoc, opts: &RunOptions) -> Result<Table, CliError> {
    let (system, numerics) = doc.resolve()?;
    let p = evaluate(&system, &numerics, opts)?;
    let mut header = vec![
        "p_out",
        "p_eve",
        "p_cov_l",
        "p_out_independent_eves",
        "p_t",
        "throughput",
    ];
    let mut row = vec![
        fmt_g(p.outage.p_out),
        fmt_g(p.outage.p_eve),
        fmt_g(p.outage.p_cov_l),
        fmt_g(p.outage.p_out_independent_eves),
        fmt_g(p.p_t),
        fmt_g(p.throughput),
    ];
    if let Some(e) = &p.mc {
        header.extend([
            "p_out_mc",
            "p_out_mc_stderr",
            "p_out_mc_ci_low",
            "p_out_mc_ci_high",
        ]);
        row.extend([e.p_hat, e.stderr, e.ci_low, e.ci_high].map(fmt_g));
    }
    header.extend(DIAGNOSTICS);
    row.extend(diagnostics(&Ok(p)));
    let mut table = Table::new(header);
    table.comments = provenance("analyze", doc, opts);
    table.push_row(row);
    Ok(table)
}

/// One row per sweep value, in sweep order. Evaluator failures become an
/// error tag in the `status` column with `nan` outputs.
pub fn run_sweep(doc: &ConfigDoc, opts: &RunOptions, sweep: &SweepSpec) -> Result<Table, CliError> {
    let wants_mc = sweep.outputs.contains(&Output::POutMc);
    if wants_mc && opts.mc.is_none() {
        return Err(CliError::Usage("p_out_mc needs --trials".into()));
    }
    let opts = RunOptions {
        mc: if wants_mc { opts.mc } else { None },
        ..*opts
    };
    let configs = sweep
        .values
        .iter()
        .map(|&v| {
            let mut d = doc.clone();
            d.set_number(&sweep.parameter, v)?;
            d.resolve()
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let points: Vec<Result<Point, Error>> = configs
        .par_iter()
        .map(|(system, numerics)| evaluate(system, numerics, &opts))
        .collect();

    let linear = format!("{}_linear", sweep.parameter);
    let mut header = vec![sweep.parameter.clone(), linear];
    for o in &sweep.outputs {
        header.extend(o.columns().iter().map(|c| c.to_string()));
    }
    header.extend(DIAGNOSTICS.map(String::from));
    let mut table = Table::new(header);
    table.comments = provenance("sweep", doc, &opts);
    table.comments.push(format!(
        "sweep: {} over {} values",
        sweep.parameter,
        sweep.values.len()
    ));
    for (&v, p) in sweep.values.iter().zip(&points) {
        let lin = if sweep.parameter.ends_with("_db") {
            db_to_linear(v)
        } else {
            v
        };
        let mut row = vec![fmt_g(v), fmt_g(lin)];
        for o in &sweep.outputs {
            match p {
                Ok(p) => row.extend(o.cells(p)),
                Err(_) => row.extend(o.columns().iter().map(|_| fmt_g(f64::NAN))),
            }
        }
        row.extend(diagnostics(p));
        table.push_row(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_lists_and_ranges() {
        assert_eq!(parse_values("1,2, 5").unwrap(), vec![1.0, 2.0, 5.0]);
        assert_eq!(
            parse_values("0:20:5").unwrap(),
            vec![0.0, 5.0, 10.0, 15.0, 20.0]
        );
        assert_eq!(parse_values("1:8:1").unwrap().len(), 8);
        assert!(parse_values("1:0:1").is_err());
        assert!(parse_values("a,b").is_err());
    }

    #[test]
    fn sweep_spec_rejects_unknown_keys() {
        assert!(SweepSpec::new("rel_tol", vec![1e-6], vec![Output::PT]).is_err());
        assert!(SweepSpec::new("rho", vec![], vec![Output::PT]).is_err());
        assert!(SweepSpec::new("rho", vec![0.5], vec![]).is_err());
        assert!("p_t".parse::<Output>().is_ok());
        assert!("p_x".parse::<Output>().is_err());
    }

    #[test]
    fn invalid_sweep_values_are_rejected_up_front() {
        let spec = SweepSpec::new("rho", vec![0.5, 1.2], vec![Output::PT]).unwrap();
        let e = run_sweep(&ConfigDoc::default(), &RunOptions::default(), &spec).unwrap_err();
        assert!(matches!(e, CliError::Config { ref key, .. } if key == "rho"));
    }

    #[test]
    fn failing_rows_carry_an_error_tag() {
        // A tiny term cap cannot reach the tolerance deep in the main-link tail.
        let doc = ConfigDoc {
            max_terms: 16,
            kappa_s: 40.0,
            ..Default::default()
        };
        let spec = SweepSpec::new("L", vec![1.0, 2.0], vec![Output::POutAnalytic]).unwrap();
        let t = run_sweep(&doc, &RunOptions::default(), &spec).unwrap();
        let status = t.column("status").unwrap();
        assert_eq!(t.rows.len(), 2);
        for row in &t.rows {
            assert!(row[status].starts_with("error:"), "{row:?}");
            assert_eq!(row[t.column("p_out").unwrap()], "nan");
        }
    }
}
