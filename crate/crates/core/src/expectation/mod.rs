//! Expected worst-victim interference and the distance laws behind it.
//!
//! Both schemes share the tier-power prefactor
//! `sum_k lambda_k P_k^(2/alpha + 1) / sum_k lambda_k P_k^(2/alpha)` and
//! differ only in the law of the serving-BS to worst-victim distance: Rayleigh
//! with the co-channel MS intensity for max-power association, and the maximum
//! of `n_ty` such distances for interference-minimizing association.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::channel::{PathLossKind, PathLossModel};
use crate::error::{invalid, Result};
use crate::tpnm::{nearest_distance_cdf, nearest_distance_pdf, NetworkConfig};

pub mod quadrature;

pub use quadrature::{Integral, Quadrature};

/// Rayleigh envelope level below which integrands are truncated.
pub const RAYLEIGH_CUTOFF: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMethod {
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferenceEstimate {
    pub value: f64,
    pub method: EstimateMethod,
    /// Absolute error bound (quadrature error plus truncated tail).
    pub error_bound: f64,
}

/// Radius beyond which `exp(-pi * intensity * r^2) < RAYLEIGH_CUTOFF`.
pub fn rayleigh_cutoff_radius(intensity: f64) -> f64 {
    (-RAYLEIGH_CUTOFF.ln() / (PI * intensity)).sqrt()
}

/// Integral over `[0, inf)` of an integrand carrying a Rayleigh factor of
/// `intensity`. The range is split at `r = 1` (knee of the bounded path loss)
/// and truncated at [`rayleigh_cutoff_radius`].
pub fn integrate_rayleigh<F: Fn(f64) -> f64>(f: F, intensity: f64, quad: &Quadrature) -> Result<Integral> {
    if !(intensity.is_finite() && intensity > 0.0) {
        return Err(invalid("intensity", format!("must be positive, got {intensity}")));
    }
    let cutoff = rayleigh_cutoff_radius(intensity);
    if cutoff > 1.0 {
        quad.integrate_pieces(f, &[0.0, 1.0, cutoff])
    } else {
        quad.integrate(f, 0.0, cutoff)
    }
}

pub fn integrate_improper<F: Fn(f64) -> f64>(f: F, quad: &Quadrature) -> Result<Integral> {
    quad.integrate_improper(f)
}

/// Integral over `(0, inf)` after the substitution `p = e^u`, for densities
/// in power that pile up near `p = 0` or decay slowly as `p -> inf`.
pub fn integrate_log_substituted<F: Fn(f64) -> f64>(f: F, quad: &Quadrature) -> Result<Integral> {
    quad.integrate_real_line(|u| {
        let p = u.exp();
        if p > 0.0 && p.is_finite() {
            f(p) * p
        } else {
            0.0
        }
    })
}

pub fn victim_distance_pdf(r: f64, ms_intensity: f64) -> f64 {
    nearest_distance_pdf(r, ms_intensity)
}

pub fn victim_distance_cdf(r: f64, ms_intensity: f64) -> f64 {
    nearest_distance_cdf(r, ms_intensity)
}

/// Density of the void distance of the normalized co-channel BS process.
pub fn void_distance_pdf(r: f64, normalized_cochannel_intensity: f64) -> f64 {
    nearest_distance_pdf(r, normalized_cochannel_intensity)
}

/// Expected candidate-set size, `lambda^BS / lambda^N_BS = 1 / cochannel_fraction`.
pub fn mean_candidate_count(config: &NetworkConfig) -> f64 {
    config.total_intensity() / config.cochannel_bs_intensity()
}

/// Expected number of normalized BSs inside the void ball of the normalized
/// co-channel process: `lambda' * E[pi R^2]`, evaluated by quadrature.
pub fn candidate_count_by_integral(
    normalized_intensity: f64,
    normalized_cochannel_intensity: f64,
    quad: &Quadrature,
) -> Result<f64> {
    let area = integrate_rayleigh(
        |r| PI * r * r * void_distance_pdf(r, normalized_cochannel_intensity),
        normalized_cochannel_intensity,
        quad,
    )?;
    Ok(normalized_intensity * area.value)
}

pub fn mean_candidate_count_by_integral(config: &NetworkConfig, quad: &Quadrature) -> Result<f64> {
    let normalized = config.normalized_intensity();
    candidate_count_by_integral(normalized, config.cochannel_fraction() * normalized, quad)
}

fn check_n_ty(n_ty: f64) -> Result<()> {
    if n_ty.is_finite() && n_ty >= 1.0 {
        Ok(())
    } else {
        Err(invalid("n_ty", format!("must be a finite number >= 1, got {n_ty}")))
    }
}

/// CDF of the largest of `n_ty` independent victim distances.
pub fn r_opt_cdf(r: f64, ms_intensity: f64, n_ty: f64) -> Result<f64> {
    check_n_ty(n_ty)?;
    Ok(victim_distance_cdf(r, ms_intensity).powf(n_ty))
}

pub fn r_opt_pdf(r: f64, ms_intensity: f64, n_ty: f64) -> Result<f64> {
    check_n_ty(n_ty)?;
    if r < 0.0 {
        return Ok(0.0);
    }
    let base = victim_distance_cdf(r, ms_intensity);
    Ok(n_ty * victim_distance_pdf(r, ms_intensity) * base.powf(n_ty - 1.0))
}

/// `sum_k lambda_k P_k^(2/alpha + 1) / sum_k lambda_k P_k^(2/alpha)`, the mean
/// transmit power of the serving BS under max-power association.
pub fn tier_power_prefactor(config: &NetworkConfig) -> f64 {
    let e = 2.0 / config.alpha();
    let (num, den) = config.tiers().iter().fold((0.0, 0.0), |(n, d), t| {
        let w = t.intensity * t.power.powf(e);
        (n + w * t.power, d + w)
    });
    num / den
}

fn check_model(config: &NetworkConfig, path_loss: &PathLossModel) -> Result<()> {
    if path_loss.kind() == PathLossKind::PowerLaw {
        return Err(invalid(
            "path_loss",
            "expected interference diverges under the power law; use the bounded law",
        ));
    }
    if path_loss.alpha() != config.alpha() {
        return Err(invalid(
            "path_loss",
            format!(
                "alpha {} differs from network alpha {}",
                path_loss.alpha(),
                config.alpha()
            ),
        ));
    }
    Ok(())
}

fn weighted_interference<F: Fn(f64) -> f64>(
    config: &NetworkConfig,
    path_loss: &PathLossModel,
    density: F,
    tail_mass_scale: f64,
    quad: &Quadrature,
) -> Result<InterferenceEstimate> {
    check_model(config, path_loss)?;
    let prefactor = tier_power_prefactor(config);
    let integral = integrate_rayleigh(
        |r| path_loss.gain_unchecked(r) * density(r),
        config.ms_intensity(),
        quad,
    )?;
    let r_max = rayleigh_cutoff_radius(config.ms_intensity());
    let tail = tail_mass_scale * RAYLEIGH_CUTOFF * path_loss.gain_unchecked(r_max);
    Ok(InterferenceEstimate {
        value: prefactor * integral.value,
        method: EstimateMethod::Quadrature,
        error_bound: prefactor * (integral.error + tail),
    })
}

/// Expected interference from the serving BS to its nearest co-channel MS
/// under max-power association.
pub fn expected_interference_conventional(
    config: &NetworkConfig,
    path_loss: &PathLossModel,
    quad: &Quadrature,
) -> Result<InterferenceEstimate> {
    let lambda = config.ms_intensity();
    weighted_interference(config, path_loss, |r| victim_distance_pdf(r, lambda), 1.0, quad)
}

/// Expected worst-victim interference under interference-minimizing
/// association with `n_ty` candidates on average.
pub fn expected_interference_proposed(
    config: &NetworkConfig,
    path_loss: &PathLossModel,
    n_ty: f64,
    quad: &Quadrature,
) -> Result<InterferenceEstimate> {
    check_n_ty(n_ty)?;
    let lambda = config.ms_intensity();
    weighted_interference(
        config,
        path_loss,
        |r| {
            let base = victim_distance_cdf(r, lambda);
            n_ty * victim_distance_pdf(r, lambda) * base.powf(n_ty - 1.0)
        },
        n_ty,
        quad,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tpnm::TierConfig;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn q() -> Quadrature {
        Quadrature::default()
    }

    #[test]
    fn rayleigh_normalization_and_mean() {
        for lambda in [0.01, 0.37, 1.0, 5.0] {
            let norm = integrate_improper(|r| nearest_distance_pdf(r, lambda), &q()).unwrap();
            assert!((norm.value - 1.0).abs() < 1e-9, "lambda {lambda}: {norm:?}");
            let mean = integrate_improper(|r| r * nearest_distance_pdf(r, lambda), &q()).unwrap();
            assert!((mean.value - 0.5 / lambda.sqrt()).abs() < 1e-8);
        }
    }

    #[test]
    fn victim_distance_examples() {
        assert_eq!(victim_distance_cdf(0.0, 0.3), 0.0);
        assert!((victim_distance_cdf(1e3, 0.3) - 1.0).abs() < 1e-15);
        assert_relative_eq!(victim_distance_cdf(1.0, 1.0 / PI), 0.632120558828558, epsilon = 1e-12);
        let norm = integrate_rayleigh(|r| victim_distance_pdf(r, 0.37), 0.37, &q()).unwrap();
        assert!((norm.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn candidate_count_closed_form() {
        let c = NetworkConfig::three_tier_reference();
        assert_relative_eq!(mean_candidate_count(&c), 3.0, epsilon = 1e-12);
        let all = c.with_cochannel_fraction(1.0).unwrap();
        assert_relative_eq!(mean_candidate_count(&all), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn candidate_count_routes_agree() {
        for cochannel in [0.1, 0.45, 2.0] {
            let normalized = 3.0 * cochannel;
            let n = candidate_count_by_integral(normalized, cochannel, &q()).unwrap();
            assert!((n - normalized / cochannel).abs() < 1e-8, "{cochannel}: {n}");
        }
        let c = NetworkConfig::three_tier_reference();
        let n = mean_candidate_count_by_integral(&c, &q()).unwrap();
        assert!((n - mean_candidate_count(&c)).abs() < 1e-8);
    }

    #[test]
    fn r_opt_examples() {
        for r in [0.0, 0.3, 1.0, 2.5] {
            assert_eq!(r_opt_cdf(r, 0.4, 1.0).unwrap(), victim_distance_cdf(r, 0.4));
        }
        assert_relative_eq!(
            r_opt_cdf(1.0, 1.0 / PI, 3.0).unwrap(),
            0.252580457827647,
            epsilon = 1e-12
        );
        assert!(r_opt_cdf(1.0, 1.0, 0.5).is_err());
        assert!(r_opt_pdf(1.0, 1.0, f64::NAN).is_err());
        for n in [1.0, 2.0, 3.0, 8.0] {
            let norm = integrate_rayleigh(|r| r_opt_pdf(r, 0.37, n).unwrap(), 0.37, &q()).unwrap();
            assert!((norm.value - 1.0).abs() < 1e-8, "n {n}: {norm:?}");
        }
    }

    #[test]
    fn prefactor_examples() {
        let c = NetworkConfig::three_tier_reference();
        assert!((tier_power_prefactor(&c) - 1.0).abs() < 1e-9);
        let s = NetworkConfig::paired(
            vec![TierConfig {
                power: 1.0,
                intensity: 0.4,
            }],
            3.0,
            0.5,
        )
        .unwrap();
        assert_eq!(tier_power_prefactor(&s), 1.0);
    }

    #[test]
    fn single_unit_tier_reduces_to_plain_integral() {
        let s = NetworkConfig::paired(
            vec![TierConfig {
                power: 1.0,
                intensity: 0.6,
            }],
            4.0,
            0.5,
        )
        .unwrap();
        let model = PathLossModel::bounded(4.0).unwrap();
        let e = expected_interference_conventional(&s, &model, &q()).unwrap();
        let plain = integrate_improper(|r| victim_distance_pdf(r, 0.3) / (1.0 + r.powi(4)), &q()).unwrap();
        assert!((e.value - plain.value).abs() < 1e-10);
        assert_eq!(e.method, EstimateMethod::Quadrature);
        assert!(e.error_bound >= 0.0);
    }

    // Frozen from an independent 30-digit evaluation of the same integrals.
    #[test]
    fn reference_network_values() {
        let c = NetworkConfig::three_tier_reference();
        let model = PathLossModel::bounded(4.0).unwrap();
        let conv = expected_interference_conventional(&c, &model, &q()).unwrap();
        assert_relative_eq!(conv.value, 0.662856891939055, max_relative = 1e-10);
        let prop = expected_interference_proposed(&c, &model, 3.0, &q()).unwrap();
        assert_relative_eq!(prop.value, 0.398438549901463, max_relative = 1e-10);

        let c25 = c.with_alpha(2.5).unwrap();
        let m25 = model.with_alpha(2.5).unwrap();
        assert_relative_eq!(
            expected_interference_conventional(&c25, &m25, &q()).unwrap().value,
            1.48427174147634,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            expected_interference_proposed(&c25, &m25, 3.0, &q()).unwrap().value,
            0.994552461036115,
            max_relative = 1e-10
        );
    }

    #[test]
    fn degenerate_and_ordered() {
        let c = NetworkConfig::three_tier_reference();
        let model = PathLossModel::bounded(4.0).unwrap();
        let conv = expected_interference_conventional(&c, &model, &q()).unwrap().value;
        let one = expected_interference_proposed(&c, &model, 1.0, &q()).unwrap().value;
        assert!((one - conv).abs() <= 1e-10 * conv);
        let mut last = one;
        for n in 2..=8 {
            let v = expected_interference_proposed(&c, &model, n as f64, &q())
                .unwrap()
                .value;
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn rejects_power_law_and_alpha_mismatch() {
        let c = NetworkConfig::three_tier_reference();
        assert!(expected_interference_conventional(&c, &PathLossModel::power_law(4.0).unwrap(), &q()).is_err());
        assert!(expected_interference_conventional(&c, &PathLossModel::bounded(3.0).unwrap(), &q()).is_err());
        assert!(expected_interference_proposed(&c, &PathLossModel::bounded(4.0).unwrap(), 0.9, &q()).is_err());
    }

    proptest! {
        #[test]
        fn more_candidates_dominate(r in 0.01f64..10.0, n1 in 1.0f64..8.0, dn in 0.01f64..4.0, lambda in 0.05f64..3.0) {
            let lo = r_opt_cdf(r, lambda, n1).unwrap();
            let hi = r_opt_cdf(r, lambda, n1 + dn).unwrap();
            prop_assert!(hi <= lo);
        }
    }
}
