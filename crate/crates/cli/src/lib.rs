//! Front end for `hetnet-core`: JSON experiment configs, parameter sweeps
//! written as CSV, and a self-check report.

pub mod config;
pub mod error;
pub mod sweep;
pub mod validation;

pub use config::{parse_config, Axis, ParsedConfig, SweepAxis};
pub use error::{CliError, CliResult};
pub use sweep::{run_sweep, run_sweep_to_file, write_csv, SweepRow, SweepSpec, CSV_HEADER};
pub use validation::{run_validation, CheckResult, ValidationReport};
