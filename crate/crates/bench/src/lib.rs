//! Shared fixtures for the benchmarks.

use hetnet_core::{ExperimentSpec, NetworkConfig, PathLossModel, Scheme};

/// Reference three-tier network, bounded path loss, 1000 trials.
pub fn reference_spec(scheme: Scheme) -> ExperimentSpec {
    let config = NetworkConfig::three_tier_reference();
    ExperimentSpec {
        path_loss: PathLossModel::bounded(config.alpha()).expect("valid alpha"),
        config,
        scheme,
        trials: 1000,
        seed: 1,
        window_halfwidth: None,
    }
}
