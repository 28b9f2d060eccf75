//! Experiment config files.
//!
//! A config is a JSON object; every field is optional and missing fields take
//! the three-tier reference values:
//!
//! ```json
//! {
//!   "tiers": [
//!     { "power": 10.0, "intensity": 0.01 },
//!     { "power": 1.0, "intensity": 0.1 },
//!     { "power": 0.1, "intensity": 1.0 }
//!   ],
//!   "alpha": 4.0,
//!   "cochannel_fraction": 0.3333333333333333,
//!   "ms_intensity": 0.37,
//!   "trials": 100000,
//!   "seed": 1,
//!   "path_loss": "bounded",
//!   "window_halfwidth": 20.0,
//!   "sweep": { "axis": "alpha", "values": [3.0, 4.0, 5.0] }
//! }
//! ```
//!
//! `ms_intensity` defaults to `cochannel_fraction * sum(tiers[].intensity)`
//! and `window_halfwidth` to a size derived from the intensities.

use std::fmt;

use hetnet_core::{ExperimentSpec, NetworkConfig, PathLossKind, PathLossModel, Scheme, TierConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const DEFAULT_TRIALS: usize = 100_000;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "alpha")]
    Alpha,
    /// Mean candidate-set size; a value `n` runs with `cochannel_fraction = 1 / n`.
    #[serde(rename = "n_ty")]
    NTy,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::Alpha => "alpha",
            Axis::NTy => "n_ty",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub axis: Axis,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedConfig {
    /// Validated base experiment; its scheme is [`Scheme::MaxPower`] until overridden.
    pub experiment: ExperimentSpec,
    pub sweep: Option<SweepAxis>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTier {
    power: f64,
    intensity: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    tiers: Option<Vec<RawTier>>,
    alpha: Option<f64>,
    cochannel_fraction: Option<f64>,
    ms_intensity: Option<f64>,
    trials: Option<usize>,
    seed: Option<u64>,
    path_loss: Option<PathLossKind>,
    window_halfwidth: Option<f64>,
    sweep: Option<SweepAxis>,
}

fn validation(e: hetnet_core::Error) -> CliError {
    match e {
        hetnet_core::Error::InvalidParameter { name, reason } => CliError::Validation(format!("{name}: {reason}")),
        other => CliError::Validation(other.to_string()),
    }
}

/// Parses and validates a config file's contents.
pub fn parse_config(contents: &str) -> CliResult<ParsedConfig> {
    let raw: RawConfig = serde_json::from_str(contents).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let reference = NetworkConfig::three_tier_reference();
    let tiers = match raw.tiers {
        Some(tiers) => tiers
            .into_iter()
            .map(|t| TierConfig::new(t.power, t.intensity))
            .collect::<Result<Vec<_>, _>>()
            .map_err(validation)?,
        None => reference.tiers().to_vec(),
    };
    if tiers.is_empty() {
        return Err(CliError::Validation("tiers: at least one tier is required".into()));
    }
    let alpha = raw.alpha.unwrap_or(reference.alpha());
    if alpha.is_nan() || alpha <= 2.0 {
        return Err(CliError::Validation(format!("alpha: alpha must exceed 2, got {alpha}")));
    }
    let fraction = raw.cochannel_fraction.unwrap_or(reference.cochannel_fraction());
    let config = match raw.ms_intensity {
        Some(ms) => NetworkConfig::new(tiers, alpha, fraction, ms),
        None => NetworkConfig::paired(tiers, alpha, fraction),
    }
    .map_err(validation)?;

    let kind = raw.path_loss.unwrap_or(PathLossKind::Bounded);
    let experiment = ExperimentSpec {
        path_loss: PathLossModel::new(kind, alpha).map_err(validation)?,
        config,
        scheme: Scheme::MaxPower,
        trials: raw.trials.unwrap_or(DEFAULT_TRIALS),
        seed: raw.seed.unwrap_or(DEFAULT_SEED),
        window_halfwidth: raw.window_halfwidth,
    };
    experiment.validate().map_err(validation)?;
    if let Some(sweep) = &raw.sweep {
        check_axis_values(sweep.axis, &sweep.values)?;
    }
    Ok(ParsedConfig {
        experiment,
        sweep: raw.sweep,
    })
}

pub(crate) fn check_axis_values(axis: Axis, values: &[f64]) -> CliResult<()> {
    if values.is_empty() {
        return Err(CliError::Validation("sweep.values: must not be empty".into()));
    }
    if values.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return Err(CliError::Validation("sweep.values: must be strictly increasing".into()));
    }
    for &v in values {
        match axis {
            Axis::Alpha if !(v > 2.0 && v.is_finite()) => {
                return Err(CliError::Validation(format!(
                    "sweep.values: alpha must exceed 2, got {v}"
                )))
            }
            Axis::NTy if !(v >= 1.0 && v.is_finite()) => {
                return Err(CliError::Validation(format!(
                    "sweep.values: n_ty must be at least 1, got {v}"
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn message(e: CliError) -> String {
        e.to_string()
    }

    #[test]
    fn empty_object_gives_reference_defaults() {
        let parsed = parse_config("{}").unwrap();
        let spec = parsed.experiment;
        assert_eq!(spec.config, NetworkConfig::three_tier_reference());
        assert_eq!(spec.trials, DEFAULT_TRIALS);
        assert_eq!(spec.seed, DEFAULT_SEED);
        assert_eq!(spec.path_loss.kind(), PathLossKind::Bounded);
        assert_eq!(spec.path_loss.alpha(), 4.0);
        assert!(spec.window_halfwidth.is_none());
        assert!(parsed.sweep.is_none());
        let powers: Vec<f64> = spec.config.tiers().iter().map(|t| t.power).collect();
        assert_eq!(powers, [10.0, 1.0, 0.1]);
        assert!((spec.config.cochannel_fraction() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn all_fields() {
        let parsed = parse_config(
            r#"{
                "tiers": [{"power": 2.0, "intensity": 0.5}],
                "alpha": 3.5,
                "cochannel_fraction": 0.5,
                "ms_intensity": 0.2,
                "trials": 10,
                "seed": 7,
                "path_loss": "power_law",
                "window_halfwidth": 12.0,
                "sweep": {"axis": "n_ty", "values": [1, 2, 4]}
            }"#,
        )
        .unwrap();
        let spec = parsed.experiment;
        assert_eq!(spec.config.num_tiers(), 1);
        assert_eq!(spec.config.alpha(), 3.5);
        assert_eq!(spec.config.ms_intensity(), 0.2);
        assert_eq!((spec.trials, spec.seed), (10, 7));
        assert_eq!(spec.path_loss.kind(), PathLossKind::PowerLaw);
        assert_eq!(spec.window_halfwidth, Some(12.0));
        let sweep = parsed.sweep.unwrap();
        assert_eq!(sweep.axis, Axis::NTy);
        assert_eq!(sweep.values, [1.0, 2.0, 4.0]);
    }

    #[test]
    fn ms_intensity_follows_cochannel_fraction() {
        let parsed = parse_config(r#"{"cochannel_fraction": 0.5}"#).unwrap();
        assert!((parsed.experiment.config.ms_intensity() - 0.555).abs() < 1e-12);
    }

    #[test]
    fn alpha_two_is_rejected() {
        let err = parse_config(r#"{"alpha": 2}"#).unwrap_err();
        assert_eq!(err.kind(), "validation");
        assert!(message(err).contains("alpha must exceed 2"));
    }

    #[test]
    fn empty_tiers_are_rejected() {
        let err = parse_config(r#"{"tiers": []}"#).unwrap_err();
        assert_eq!(err.kind(), "validation");
        assert!(message(err).contains("tiers"));
    }

    #[test]
    fn negative_intensity_names_the_field() {
        let err = parse_config(r#"{"tiers": [{"power": 1, "intensity": -1}]}"#).unwrap_err();
        assert!(message(err).contains("tiers[].intensity"));
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_config("{\n  \"alpha\": 4,\n  oops\n}").unwrap_err();
        match err {
            CliError::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_field_is_a_parse_error() {
        let err = parse_config(r#"{"alpah": 4}"#).unwrap_err();
        assert_eq!(err.kind(), "parse");
        assert!(message(err).contains("alpah"));
    }

    #[test]
    fn bad_sweep_values() {
        for body in [
            r#"{"sweep": {"axis": "alpha", "values": []}}"#,
            r#"{"sweep": {"axis": "alpha", "values": [3, 3]}}"#,
            r#"{"sweep": {"axis": "alpha", "values": [2, 3]}}"#,
            r#"{"sweep": {"axis": "n_ty", "values": [0.5, 2]}}"#,
        ] {
            assert_eq!(parse_config(body).unwrap_err().kind(), "validation", "{body}");
        }
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(message(parse_config(r#"{"trials": 0}"#).unwrap_err()).contains("trials"));
    }
}
