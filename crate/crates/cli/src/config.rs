//! Flat JSON configuration. Keys mirror the scenario and numerics fields;
//! dB-valued keys carry a `_db` suffix. Missing keys keep their defaults.

use serde_json::{json, Map, Value};
use swipt_secrecy::secrecy::{MeanInterpretation, NumericsConfig, SystemConfig};
use swipt_secrecy::{db_to_linear, AccuracyBudget, Error, KappaMuParams};

use crate::error::CliError;

/// Every accepted key, in echo order.
pub const KEYS: &[&str] = &[
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
    "mean_interpretation",
    "rel_tol",
    "max_terms",
    "quad_rel_tol",
    "quad_abs_tol",
    "tail_cutoff_sigma",
    "fixed_terms",
];

const INTEGER_KEYS: &[&str] = &["L", "M", "N", "max_terms", "fixed_terms"];

/// Unresolved configuration as the user wrote it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigDoc {
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub rho: f64,
    pub alpha: f64,
    pub r_s: f64,
    pub sigma2_over_n0: f64,
    pub gamma_s_db: f64,
    pub gamma_e_db: f64,
    pub pl_s_db: f64,
    pub pl_e_db: f64,
    pub kappa_s: f64,
    pub mu_s: f64,
    pub kappa_e: f64,
    pub mu_e: f64,
    pub mean_interpretation: MeanInterpretation,
    pub rel_tol: f64,
    pub max_terms: usize,
    pub quad_rel_tol: f64,
    pub quad_abs_tol: f64,
    pub tail_cutoff_sigma: f64,
    pub fixed_terms: Option<usize>,
}

impl Default for ConfigDoc {
    fn default() -> Self {
        let system = SystemConfig::default();
        let numerics = NumericsConfig::default();
        ConfigDoc {
            l: system.ap_antennas,
            m: system.rx_antennas,
            n: system.eavesdroppers,
            rho: system.rho,
            alpha: system.alpha,
            r_s: system.target_rate,
            sigma2_over_n0: system.sigma2_over_n0,
            gamma_s_db: 10.0,
            gamma_e_db: 0.0,
            pl_s_db: 1.0,
            pl_e_db: 1.0,
            kappa_s: system.main_branch.kappa(),
            mu_s: system.main_branch.mu(),
            kappa_e: system.eaves.kappa(),
            mu_e: system.eaves.mu(),
            mean_interpretation: system.mean_interpretation,
            rel_tol: numerics.series_budget.rel_tol(),
            max_terms: numerics.series_budget.max_terms(),
            quad_rel_tol: numerics.quad_rel_tol,
            quad_abs_tol: numerics.quad_abs_tol,
            tail_cutoff_sigma: numerics.tail_cutoff_sigma,
            fixed_terms: numerics.fixed_terms,
        }
    }
}

impl ConfigDoc {
    /// Applies every key of a JSON object on top of `self`.
    pub fn merge_json(&mut self, document: &str) -> Result<(), CliError> {
        let value: Value = serde_json::from_str(document)?;
        let Value::Object(map) = value else {
            return Err(CliError::Usage(
                "config document must be a JSON object".into(),
            ));
        };
        for (key, value) in &map {
            self.set_value(key, value)?;
        }
        Ok(())
    }

    /// `key=value` from the command line. The value is read as JSON when it
    /// parses, otherwise as a bare string.
    pub fn set_assignment(&mut self, assignment: &str) -> Result<(), CliError> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected key=value, got {assignment:?}")))?;
        let key = key.trim();
        let raw = raw.trim();
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        self.set_value(key, &value)
    }

    pub fn set_value(&mut self, key: &str, value: &Value) -> Result<(), CliError> {
        match key {
            "mean_interpretation" => {
                let s = value
                    .as_str()
                    .ok_or_else(|| CliError::config(key, "expected a string"))?;
                self.mean_interpretation = s
                    .parse()
                    .map_err(|e: Error| CliError::config(key, reason(&e)))?;
                Ok(())
            }
            "fixed_terms" if value.is_null() => {
                self.fixed_terms = None;
                Ok(())
            }
            _ => {
                let x = value.as_f64().ok_or_else(|| {
                    CliError::config(key, format!("expected a number, got {value}"))
                })?;
                self.set_number(key, x)
            }
        }
    }

    /// Sets a numeric key. Integer keys reject fractional or negative values.
    pub fn set_number(&mut self, key: &str, x: f64) -> Result<(), CliError> {
        if INTEGER_KEYS.contains(&key) {
            if !(x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64) {
                return Err(CliError::config(
                    key,
                    format!("expected a non-negative integer, got {x}"),
                ));
            }
            let k = x as usize;
            match key {
                "L" => self.l = k,
                "M" => self.m = k,
                "N" => self.n = k,
                "max_terms" => self.max_terms = k,
                _ => self.fixed_terms = Some(k),
            }
            return Ok(());
        }
        let slot = match key {
            "rho" => &mut self.rho,
            "alpha" => &mut self.alpha,
            "R_s" => &mut self.r_s,
            "sigma2_over_N0" => &mut self.sigma2_over_n0,
            "gamma_s_db" => &mut self.gamma_s_db,
            "gamma_e_db" => &mut self.gamma_e_db,
            "PL_s_db" => &mut self.pl_s_db,
            "PL_e_db" => &mut self.pl_e_db,
            "kappa_s" => &mut self.kappa_s,
            "mu_s" => &mut self.mu_s,
            "kappa_e" => &mut self.kappa_e,
            "mu_e" => &mut self.mu_e,
            "rel_tol" => &mut self.rel_tol,
            "quad_rel_tol" => &mut self.quad_rel_tol,
            "quad_abs_tol" => &mut self.quad_abs_tol,
            "tail_cutoff_sigma" => &mut self.tail_cutoff_sigma,
            "mean_interpretation" => return Err(CliError::config(key, "expected a string")),
            _ => return Err(CliError::config(key, "unknown key")),
        };
        if !x.is_finite() {
            return Err(CliError::config(key, format!("must be finite, got {x}")));
        }
        *slot = x;
        Ok(())
    }

    /// Current value of a numeric key; `None` for unknown or non-numeric keys.
    pub fn number(&self, key: &str) -> Option<f64> {
        Some(match key {
            "L" => self.l as f64,
            "M" => self.m as f64,
            "N" => self.n as f64,
            "rho" => self.rho,
            "alpha" => self.alpha,
            "R_s" => self.r_s,
            "sigma2_over_N0" => self.sigma2_over_n0,
            "gamma_s_db" => self.gamma_s_db,
            "gamma_e_db" => self.gamma_e_db,
            "PL_s_db" => self.pl_s_db,
            "PL_e_db" => self.pl_e_db,
            "kappa_s" => self.kappa_s,
            "mu_s" => self.mu_s,
            "kappa_e" => self.kappa_e,
            "mu_e" => self.mu_e,
            "rel_tol" => self.rel_tol,
            "max_terms" => self.max_terms as f64,
            "quad_rel_tol" => self.quad_rel_tol,
            "quad_abs_tol" => self.quad_abs_tol,
            "tail_cutoff_sigma" => self.tail_cutoff_sigma,
            "fixed_terms" => self.fixed_terms? as f64,
            _ => return None,
        })
    }

    /// Validated scenario and numerics. Errors name the offending key.
    pub fn resolve(&self) -> Result<(SystemConfig, NumericsConfig), CliError> {
        let branch = |kappa: f64, mu: f64, mean_db: f64, link: &str| {
            KappaMuParams::new(kappa, mu, db_to_linear(mean_db)).map_err(|e| match &e {
                Error::InvalidParameter { name: "kappa", .. } => {
                    CliError::config(format!("kappa_{link}"), reason(&e))
                }
                Error::InvalidParameter { name: "mu", .. } => {
                    CliError::config(format!("mu_{link}"), reason(&e))
                }
                _ => CliError::config(format!("gamma_{link}_db"), reason(&e)),
            })
        };
        let system = SystemConfig {
            ap_antennas: self.l,
            rx_antennas: self.m,
            eavesdroppers: self.n,
            rho: self.rho,
            alpha: self.alpha,
            target_rate: self.r_s,
            sigma2_over_n0: self.sigma2_over_n0,
            pathloss_main: db_to_linear(self.pl_s_db),
            pathloss_eaves: db_to_linear(self.pl_e_db),
            main_branch: branch(self.kappa_s, self.mu_s, self.gamma_s_db, "s")?,
            eaves: branch(self.kappa_e, self.mu_e, self.gamma_e_db, "e")?,
            mean_interpretation: self.mean_interpretation,
        };
        system.validate().map_err(keyed)?;
        let numerics = NumericsConfig {
            series_budget: AccuracyBudget::new(self.rel_tol, self.max_terms).map_err(keyed)?,
            quad_rel_tol: self.quad_rel_tol,
            quad_abs_tol: self.quad_abs_tol,
            tail_cutoff_sigma: self.tail_cutoff_sigma,
            fixed_terms: self.fixed_terms,
        };
        numerics.validate().map_err(keyed)?;
        Ok((system, numerics))
    }

    /// Every key with its value, sorted by key.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for &key in KEYS {
            let value = match key {
                "mean_interpretation" => json!(self.mean_interpretation.as_str()),
                "fixed_terms" => json!(self.fixed_terms),
                k if INTEGER_KEYS.contains(&k) => json!(self.number(k).unwrap() as u64),
                k => json!(self.number(k).unwrap()),
            };
            map.insert(key.to_string(), value);
        }
        Value::Object(map)
    }
}

/// Parses a JSON document on top of the defaults.
pub fn parse_config(document: &str) -> Result<(SystemConfig, NumericsConfig), CliError> {
    let mut doc = ConfigDoc::default();
    doc.merge_json(document)?;
    doc.resolve()
}

fn reason(e: &Error) -> String {
    match e {
        Error::InvalidParameter { reason, .. } => reason.clone(),
        other => other.to_string(),
    }
}

/// Maps a core parameter name back to its config key.
fn keyed(e: Error) -> CliError {
    match &e {
        Error::InvalidParameter { name, .. } => {
            let key = match *name {
                "PL_s" => "PL_s_db",
                "PL_e" => "PL_e_db",
                other => other,
            };
            CliError::config(key, reason(&e))
        }
        _ => CliError::Numerics(e),
    }
}
