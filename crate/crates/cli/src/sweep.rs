//! Parameter sweeps over `alpha` or the mean candidate-set size.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use hetnet_core::montecarlo::run_experiment_with;
use hetnet_core::{Execution, ExperimentSpec, ExperimentSummary, Scheme};

use crate::config::{check_axis_values, Axis};
use crate::error::{CliError, CliResult};

pub const CSV_HEADER: [&str; 8] = [
    "axis_value",
    "scheme",
    "mc_mean",
    "mc_ci95",
    "oracle_value",
    "blocked_fraction",
    "trials",
    "seed",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    axis: Axis,
    values: Vec<f64>,
    base: ExperimentSpec,
    output_path: PathBuf,
}

impl SweepSpec {
    pub fn new(axis: Axis, values: Vec<f64>, base: ExperimentSpec, output_path: impl Into<PathBuf>) -> CliResult<Self> {
        check_axis_values(axis, &values)?;
        base.validate()?;
        Ok(Self {
            axis,
            values,
            base,
            output_path: output_path.into(),
        })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn base(&self) -> &ExperimentSpec {
        &self.base
    }

    pub fn output_path(&self) -> &Path {
        &self.output_path
    }

    /// The experiment at one axis value. The `n_ty` axis keeps the co-channel
    /// MS intensity fixed and sets `cochannel_fraction = 1 / n_ty`.
    pub fn cell(&self, value: f64, scheme: Scheme) -> CliResult<ExperimentSpec> {
        let base = &self.base;
        let (config, path_loss) = match self.axis {
            Axis::Alpha => (base.config.with_alpha(value)?, base.path_loss.with_alpha(value)?),
            Axis::NTy => (base.config.with_cochannel_fraction(1.0 / value)?, base.path_loss),
        };
        Ok(ExperimentSpec {
            config,
            path_loss,
            scheme,
            ..base.clone()
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub summary: ExperimentSummary,
}

impl SweepRow {
    /// Fields in [`CSV_HEADER`] order. Floats use the shortest round-trip
    /// representation; an undefined CI or a missing oracle is an empty field.
    pub fn record(&self) -> [String; 8] {
        let s = &self.summary;
        [
            self.axis_value.to_string(),
            s.scheme.name().to_string(),
            s.mean_victim_interference.to_string(),
            if s.ci_defined {
                s.ci95_halfwidth.to_string()
            } else {
                String::new()
            },
            s.oracle_value.map(|v| v.to_string()).unwrap_or_default(),
            s.blocked_fraction.to_string(),
            s.trials_requested.to_string(),
            s.seed.to_string(),
        ]
    }
}

/// One row per axis value and scheme, axis-major, schemes in the given order.
pub fn run_sweep(sweep: &SweepSpec, schemes: &[Scheme], execution: Execution) -> CliResult<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(sweep.values.len() * schemes.len());
    for &value in &sweep.values {
        for &scheme in schemes {
            let summary = run_experiment_with(&sweep.cell(value, scheme)?, execution)?;
            rows.push(SweepRow {
                axis_value: value,
                summary,
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> CliResult<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for row in rows {
        writer.write_record(row.record())?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Creates the output file, then runs the sweep and writes it. An
/// unwritable path fails before any trial runs.
pub fn run_sweep_to_file(sweep: &SweepSpec, schemes: &[Scheme], execution: Execution) -> CliResult<Vec<SweepRow>> {
    let file = File::create(&sweep.output_path).map_err(|e| CliError::io(&sweep.output_path, e))?;
    let rows = run_sweep(sweep, schemes, execution)?;
    write_csv(&rows, std::io::BufWriter::new(file))?;
    Ok(rows)
}
