//! Monte Carlo experiment engine and goodness-of-fit tools.
//!
//! Trial `i` of an experiment draws everything from
//! `RandomStream::new(seed).split(i)`, so a trial's outcome does not depend on
//! which thread runs it or in what order. Per-trial results are collected in
//! index order and reduced serially; serial and parallel runs are therefore
//! bit-identical.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::association::{associate_interference_min, associate_max_power, realize_scenario};
use crate::channel::{PathLossKind, PathLossModel};
use crate::error::{invalid, Error, Result};
use crate::expectation::{
    expected_interference_conventional, expected_interference_proposed, mean_candidate_count, Quadrature,
};
use crate::geometry::{nearest, sample_ppp, superpose, Point, Tag, Window};
use crate::rng::RandomStream;
use crate::tpnm::NetworkConfig;

/// 1.96, the two-sided 95% normal quantile.
pub const Z_95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Max received power.
    #[serde(rename = "conventional")]
    MaxPower,
    /// Interference-minimizing choice within the QoS candidate set.
    #[serde(rename = "proposed")]
    InterferenceMin,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::MaxPower, Scheme::InterferenceMin];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::MaxPower => "conventional",
            Scheme::InterferenceMin => "proposed",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conventional" | "max_power" => Ok(Scheme::MaxPower),
            "proposed" | "interference_min" => Ok(Scheme::InterferenceMin),
            other => Err(invalid("scheme", format!("unknown scheme `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub config: NetworkConfig,
    pub scheme: Scheme,
    pub path_loss: PathLossModel,
    pub trials: usize,
    pub seed: u64,
    /// Square half-width; derived from the intensities when `None`.
    pub window_halfwidth: Option<f64>,
}

/// `max(5 / sqrt(lambda^N_MS), 5 / sqrt(lambda^N_BS), 10)`.
pub fn auto_halfwidth(config: &NetworkConfig) -> f64 {
    (5.0 / config.ms_intensity().sqrt())
        .max(5.0 / config.cochannel_bs_intensity().sqrt())
        .max(10.0)
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        if self.path_loss.alpha() != self.config.alpha() {
            return Err(invalid(
                "path_loss",
                format!(
                    "alpha {} differs from network alpha {}",
                    self.path_loss.alpha(),
                    self.config.alpha()
                ),
            ));
        }
        if let Some(h) = self.window_halfwidth {
            if !(h.is_finite() && h > 0.0) {
                return Err(invalid("window_halfwidth", format!("must be positive, got {h}")));
            }
        }
        Ok(())
    }

    pub fn window(&self) -> Result<Window> {
        let h = self.window_halfwidth.unwrap_or_else(|| auto_halfwidth(&self.config));
        Window::square(Point::ORIGIN, h)
    }

    pub fn with_scheme(&self, scheme: Scheme) -> Self {
        Self { scheme, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TrialOutcome {
    Interference(f64),
    Blocked,
}

fn trial_with_window(spec: &ExperimentSpec, window: &Window, trial_index: u64) -> Result<TrialOutcome> {
    let stream = RandomStream::new(spec.seed).split(trial_index);
    let scenario = realize_scenario(&spec.config, &spec.path_loss, window, &stream)?;
    let outcome = match spec.scheme {
        Scheme::MaxPower => associate_max_power(&scenario)?,
        Scheme::InterferenceMin => associate_interference_min(&scenario)?,
    };
    Ok(if outcome.is_blocked() {
        TrialOutcome::Blocked
    } else {
        TrialOutcome::Interference(outcome.victim_interference)
    })
}

/// Worst-victim interference of the tagged MS's serving BS in one realization.
pub fn run_trial(spec: &ExperimentSpec, trial_index: u64) -> Result<TrialOutcome> {
    spec.validate()?;
    trial_with_window(spec, &spec.window()?, trial_index)
}

/// All trial outcomes in index order.
pub fn run_trials(spec: &ExperimentSpec, execution: Execution) -> Result<Vec<TrialOutcome>> {
    spec.validate()?;
    let window = spec.window()?;
    let trials = spec.trials as u64;
    match execution {
        Execution::Serial => (0..trials).map(|i| trial_with_window(spec, &window, i)).collect(),
        Execution::Parallel => (0..trials)
            .into_par_iter()
            .map(|i| trial_with_window(spec, &window, i))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub scheme: Scheme,
    pub config: NetworkConfig,
    pub path_loss: PathLossModel,
    pub seed: u64,
    pub trials_requested: usize,
    /// Non-blocked trials.
    pub trials_used: usize,
    pub mean_victim_interference: f64,
    /// Normal-approximation 95% half-width; 0 when fewer than two trials were used.
    pub ci95_halfwidth: f64,
    pub ci_defined: bool,
    pub blocked_fraction: f64,
    /// Quadrature value of the matching closed form, bounded path loss only.
    pub oracle_value: Option<f64>,
}

/// Mean and normal-approximation 95% half-width. `None` for the half-width
/// when there are fewer than two samples.
pub fn mean_and_ci95(samples: &[f64]) -> Option<(f64, Option<f64>)> {
    if samples.is_empty() {
        return None;
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return Some((mean, None));
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    Some((mean, Some(Z_95 * (var / n).sqrt())))
}

/// Closed-form expected interference for the spec's scheme, when it exists.
pub fn oracle_value(spec: &ExperimentSpec) -> Result<Option<f64>> {
    if spec.path_loss.kind() == PathLossKind::PowerLaw {
        return Ok(None);
    }
    let quad = Quadrature::default();
    let estimate = match spec.scheme {
        Scheme::MaxPower => expected_interference_conventional(&spec.config, &spec.path_loss, &quad)?,
        Scheme::InterferenceMin => {
            expected_interference_proposed(&spec.config, &spec.path_loss, mean_candidate_count(&spec.config), &quad)?
        }
    };
    Ok(Some(estimate.value))
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentSummary> {
    run_experiment_with(spec, Execution::Parallel)
}

pub fn run_experiment_with(spec: &ExperimentSpec, execution: Execution) -> Result<ExperimentSummary> {
    let outcomes = run_trials(spec, execution)?;
    let samples: Vec<f64> = outcomes
        .iter()
        .filter_map(|o| match *o {
            TrialOutcome::Interference(v) => Some(v),
            TrialOutcome::Blocked => None,
        })
        .collect();
    let (mean, ci) = mean_and_ci95(&samples).ok_or(Error::AllBlocked { trials: spec.trials })?;
    Ok(ExperimentSummary {
        scheme: spec.scheme,
        config: spec.config.clone(),
        path_loss: spec.path_loss,
        seed: spec.seed,
        trials_requested: spec.trials,
        trials_used: samples.len(),
        mean_victim_interference: mean,
        ci95_halfwidth: ci.unwrap_or(0.0),
        ci_defined: ci.is_some(),
        blocked_fraction: (spec.trials - samples.len()) as f64 / spec.trials as f64,
        oracle_value: oracle_value(spec)?,
    })
}

/// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(invalid("samples", "need at least one sample"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(invalid("samples", "NaN sample"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
    }))
}

/// Two-sample KS distance, `sup |F_a - F_b|` over the pooled sample.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(invalid("samples", "need at least one sample on each side"));
    }
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(invalid("samples", "NaN sample"));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Two-sample KS critical value at significance 0.01.
pub fn ks_two_sample_critical_value(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    1.63 * ((n + m) / (n * m)).sqrt()
}

/// One-sample KS critical value at significance 0.01, `1.63 / sqrt(n)`.
pub fn ks_critical_value(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

/// Distance from the window center to the nearest point of a fresh PPP.
/// `None` when the realization is empty.
pub fn sample_nearest_distance(intensity: f64, window: &Window, stream: &mut RandomStream) -> Result<Option<f64>> {
    let pattern = sample_ppp(intensity, window, Tag::Ms, stream)?;
    Ok(nearest(&pattern, &window.center(), None).map(|n| n.distance))
}

/// Strongest power-law received power at the window center over a fresh
/// multi-tier realization. `None` when no BS was drawn.
pub fn sample_max_received_power(
    config: &NetworkConfig,
    window: &Window,
    stream: &RandomStream,
) -> Result<Option<f64>> {
    let tiers = config
        .tiers()
        .iter()
        .enumerate()
        .map(|(k, t)| sample_ppp(t.intensity, window, Tag::Tier(k), &mut stream.split(k as u64)))
        .collect::<Result<Vec<_>>>()?;
    let all = superpose(&tiers)?;
    let center = window.center();
    let alpha = config.alpha();
    Ok(all
        .iter()
        .map(|(p, tag)| {
            let k = tag.tier().expect("tier-tagged sample");
            config.tiers()[k].power * p.distance(&center).powf(-alpha)
        })
        .reduce(f64::max))
}
