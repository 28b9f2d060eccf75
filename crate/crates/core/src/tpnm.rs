//! Transmission power normalization.
//!
//! Scaling every tier-`k` base station by `P_k^(-1/alpha)` about a receiver
//! turns a multi-tier network into a single-tier network of unit-power
//! transmitters. Under the power-law path loss the received power at the
//! receiver is unchanged by the map, and a tier-`k` PPP of intensity
//! `lambda_k` becomes a PPP of intensity `P_k^(2/alpha) lambda_k`.
//!
//! This module also holds the received-power and scaled-distance laws for a
//! typical receiver. The CDF of the strongest received power is computed along
//! two independent routes ([`max_power_cdf_direct`], [`max_power_cdf_tpnm`])
//! so that their agreement is a real check.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::channel::check_alpha;
use crate::error::{invalid, Result};
use crate::geometry::{Point, PointPattern, Tag};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TierConfig {
    /// Transmit power `P_k`.
    pub power: f64,
    /// Base-station intensity `lambda_k`.
    pub intensity: f64,
}

impl TierConfig {
    pub fn new(power: f64, intensity: f64) -> Result<Self> {
        let t = Self { power, intensity };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        if !(self.power.is_finite() && self.power > 0.0) {
            return Err(invalid(
                "tiers[].power",
                format!("must be positive, got {}", self.power),
            ));
        }
        if !(self.intensity.is_finite() && self.intensity > 0.0) {
            return Err(invalid(
                "tiers[].intensity",
                format!("must be positive, got {}", self.intensity),
            ));
        }
        Ok(())
    }
}

/// Validated network parameters. Construct with [`NetworkConfig::new`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    tiers: Vec<TierConfig>,
    alpha: f64,
    cochannel_fraction: f64,
    ms_intensity: f64,
}

impl NetworkConfig {
    pub fn new(tiers: Vec<TierConfig>, alpha: f64, cochannel_fraction: f64, ms_intensity: f64) -> Result<Self> {
        if tiers.is_empty() {
            return Err(invalid("tiers", "at least one tier is required"));
        }
        for t in &tiers {
            t.validate()?;
        }
        check_alpha(alpha)?;
        if !(cochannel_fraction > 0.0 && cochannel_fraction <= 1.0) {
            return Err(invalid(
                "cochannel_fraction",
                format!("must lie in (0, 1], got {cochannel_fraction}"),
            ));
        }
        if !(ms_intensity.is_finite() && ms_intensity > 0.0) {
            return Err(invalid("ms_intensity", format!("must be positive, got {ms_intensity}")));
        }
        Ok(Self {
            tiers,
            alpha,
            cochannel_fraction,
            ms_intensity,
        })
    }

    /// Config whose co-channel MS intensity equals the co-channel BS intensity.
    pub fn paired(tiers: Vec<TierConfig>, alpha: f64, cochannel_fraction: f64) -> Result<Self> {
        let total: f64 = tiers.iter().map(|t| t.intensity).sum();
        Self::new(tiers, alpha, cochannel_fraction, cochannel_fraction * total)
    }

    /// Three-tier macro/pico/femto reference network: `P = {10, 1, 0.1}`,
    /// `lambda = {0.01, 0.1, 1}`, one BS in three on the tagged channel, `alpha = 4`.
    pub fn three_tier_reference() -> Self {
        let tiers = vec![
            TierConfig {
                power: 10.0,
                intensity: 0.01,
            },
            TierConfig {
                power: 1.0,
                intensity: 0.1,
            },
            TierConfig {
                power: 0.1,
                intensity: 1.0,
            },
        ];
        Self::paired(tiers, 4.0, 1.0 / 3.0).expect("reference parameters are valid")
    }

    pub fn tiers(&self) -> &[TierConfig] {
        &self.tiers
    }

    pub fn num_tiers(&self) -> usize {
        self.tiers.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn cochannel_fraction(&self) -> f64 {
        self.cochannel_fraction
    }

    pub fn ms_intensity(&self) -> f64 {
        self.ms_intensity
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.tiers.clone(), alpha, self.cochannel_fraction, self.ms_intensity)
    }

    pub fn with_cochannel_fraction(&self, fraction: f64) -> Result<Self> {
        Self::new(self.tiers.clone(), self.alpha, fraction, self.ms_intensity)
    }

    pub fn with_ms_intensity(&self, ms_intensity: f64) -> Result<Self> {
        Self::new(self.tiers.clone(), self.alpha, self.cochannel_fraction, ms_intensity)
    }

    /// `lambda^BS`, all tiers.
    pub fn total_intensity(&self) -> f64 {
        self.tiers.iter().map(|t| t.intensity).sum()
    }

    /// `lambda^N_BS`, base stations on the tagged channel.
    pub fn cochannel_bs_intensity(&self) -> f64 {
        self.cochannel_fraction * self.total_intensity()
    }

    /// Intensity of tier `k` after normalization, `P_k^(2/alpha) lambda_k`.
    pub fn normalized_tier_intensity(&self, k: usize) -> Result<f64> {
        let t = self.tier(k)?;
        Ok(t.power.powf(2.0 / self.alpha) * t.intensity)
    }

    /// Intensity of the normalized single-tier network, `sum_k P_k^(2/alpha) lambda_k`.
    pub fn normalized_intensity(&self) -> f64 {
        self.tiers
            .iter()
            .map(|t| t.power.powf(2.0 / self.alpha) * t.intensity)
            .sum()
    }

    /// Fraction of users served by tier `k` under max-power association.
    pub fn tier_fraction(&self, k: usize) -> Result<f64> {
        Ok(self.normalized_tier_intensity(k)? / self.normalized_intensity())
    }

    pub fn scale_factor(&self, k: usize) -> Result<f64> {
        scale_factor(self.tier(k)?.power, self.alpha)
    }

    pub(crate) fn tier(&self, k: usize) -> Result<&TierConfig> {
        self.tiers
            .get(k)
            .ok_or_else(|| invalid("tier", format!("index {k} out of range for {} tiers", self.tiers.len())))
    }
}

/// `P^(-1/alpha)`: the factor mapping a power-`P` transmitter onto a unit-power one.
pub fn scale_factor(power: f64, alpha: f64) -> Result<f64> {
    if !(power.is_finite() && power > 0.0) {
        return Err(invalid("power", format!("must be positive, got {power}")));
    }
    check_alpha(alpha)?;
    Ok(power.powf(-1.0 / alpha))
}

pub fn normalized_intensity(config: &NetworkConfig) -> f64 {
    config.normalized_intensity()
}

pub fn tier_fraction(config: &NetworkConfig, k: usize) -> Result<f64> {
    config.tier_fraction(k)
}

/// Maps each tier-`k` point `p` to `anchor + P_k^(-1/alpha) (p - anchor)`.
///
/// Point order and tier tags are kept, so index `i` of the result is the
/// image of index `i` of the input. Images all transmit with unit power. The
/// output window is the input window scaled by the largest tier factor, which
/// contains every image when the anchor lies in the input window.
pub fn normalize_realization(
    bs_pattern: &PointPattern,
    config: &NetworkConfig,
    anchor: &Point,
) -> Result<PointPattern> {
    if !bs_pattern.window().contains(anchor) {
        return Err(invalid("anchor", "must lie inside the pattern window"));
    }
    let factors: Vec<f64> = (0..config.num_tiers())
        .map(|k| config.scale_factor(k))
        .collect::<Result<_>>()?;
    let mut points = Vec::with_capacity(bs_pattern.len());
    for (p, tag) in bs_pattern.iter() {
        let k = match tag {
            Tag::Tier(k) if k < factors.len() => k,
            other => {
                return Err(invalid(
                    "tier_tags",
                    format!("{other:?} is not a tier of this {}-tier network", factors.len()),
                ))
            }
        };
        points.push(p.scaled_about(factors[k], anchor));
    }
    let max_factor = factors.iter().copied().fold(0.0, f64::max);
    let w = bs_pattern.window();
    let window = crate::geometry::Window::new(
        w.shape(),
        w.center().scaled_about(max_factor, anchor),
        w.extent() * max_factor,
    )?;
    Ok(PointPattern::from_parts_unchecked(
        points,
        bs_pattern.tags().to_vec(),
        window,
    ))
}

/// Density of the distance from a fixed point to the nearest point of a PPP.
pub fn nearest_distance_pdf(r: f64, intensity: f64) -> f64 {
    if r < 0.0 {
        return 0.0;
    }
    2.0 * PI * intensity * r * (-intensity * PI * r * r).exp()
}

pub fn nearest_distance_cdf(r: f64, intensity: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    -(-intensity * PI * r * r).exp_m1()
}

/// Density of `P_k R_k^(-alpha)`, the power received from the nearest tier-`k` BS.
pub fn tier_power_pdf(p: f64, k: usize, config: &NetworkConfig) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(invalid("p", format!("power must be positive, got {p}")));
    }
    let t = config.tier(k)?;
    let a = config.alpha();
    let ratio = (t.power / p).powf(2.0 / a);
    let envelope = (-PI * t.intensity * ratio).exp();
    if envelope == 0.0 || !p.is_finite() {
        return Ok(0.0);
    }
    Ok(2.0 * PI * t.intensity / (a * p) * ratio * envelope)
}

/// CDF of the power received from the nearest tier-`k` BS.
pub fn tier_power_cdf(p: f64, k: usize, config: &NetworkConfig) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(invalid("p", format!("power must be positive, got {p}")));
    }
    let t = config.tier(k)?;
    Ok((-PI * t.intensity * (t.power / p).powf(2.0 / config.alpha())).exp())
}

/// Density of `D_k = P_k^(-1/alpha) R_k`.
pub fn tier_scaled_distance_pdf(d: f64, k: usize, config: &NetworkConfig) -> Result<f64> {
    Ok(nearest_distance_pdf(d, config.normalized_tier_intensity(k)?))
}

pub fn tier_scaled_distance_cdf(d: f64, k: usize, config: &NetworkConfig) -> Result<f64> {
    Ok(nearest_distance_cdf(d, config.normalized_tier_intensity(k)?))
}

/// CDF of `D = min_k D_k`, built from the per-tier laws assuming independent tiers.
pub fn min_d_cdf(d: f64, config: &NetworkConfig) -> f64 {
    if d <= 0.0 {
        return 0.0;
    }
    let survival: f64 = (0..config.num_tiers())
        .map(|k| {
            let t = &config.tiers()[k];
            (-PI * t.intensity * t.power.powf(2.0 / config.alpha()) * d * d).exp()
        })
        .product();
    1.0 - survival
}

/// Density of `D = min_k D_k`.
pub fn min_d_pdf(d: f64, config: &NetworkConfig) -> f64 {
    if d < 0.0 {
        return 0.0;
    }
    let lambda = config.normalized_intensity();
    2.0 * PI * lambda * d * (-PI * lambda * d * d).exp()
}

/// `P(max received power <= p)` without normalization: the strongest power is
/// below `p` iff every tier's nearest BS delivers less than `p`, so this is
/// the product of the per-tier power CDFs.
pub fn max_power_cdf_direct(p: f64, config: &NetworkConfig) -> Result<f64> {
    let mut cdf = 1.0;
    for k in 0..config.num_tiers() {
        cdf *= tier_power_cdf(p, k, config)?;
    }
    Ok(cdf)
}

/// `P(max received power <= p)` through the normalized network: the strongest
/// power is `R^(-alpha)` with `R` the void distance of a single PPP of
/// intensity `lambda'`, so the CDF is `1 - F_R(p^(-1/alpha))`.
pub fn max_power_cdf_tpnm(p: f64, config: &NetworkConfig) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(invalid("p", format!("power must be positive, got {p}")));
    }
    let lambda = config.normalized_intensity();
    let r = p.powf(-1.0 / config.alpha());
    Ok(1.0 - nearest_distance_cdf(r, lambda))
}
