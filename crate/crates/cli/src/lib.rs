//! Command-line front end for `swipt-secrecy`: JSON configuration, sweeps,
//! figure presets, validation reports and CSV output.
//!
//! Configuration precedence is flags > file > defaults.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod eval;
pub mod presets;
pub mod table;
pub mod validate;

pub use config::{parse_config, ConfigDoc};
pub use error::CliError;
pub use eval::{run_analyze, run_sweep, McSettings, Output, RunOptions, SweepSpec};
pub use presets::{run_figure_preset, Preset};
pub use table::Table;
pub use validate::{run_validate, Report, Status};
