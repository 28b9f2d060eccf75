//! Path loss, received power and SIR.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathLossKind {
    /// `l(r) = r^-alpha`. Power normalization is exact under this law.
    PowerLaw,
    /// `l(r) = 1 / (1 + r^alpha)`, finite at the origin.
    Bounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossModel {
    kind: PathLossKind,
    alpha: f64,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 2.0 {
        Ok(())
    } else {
        Err(invalid("alpha", "alpha must exceed 2"))
    }
}

impl PathLossModel {
    pub fn new(kind: PathLossKind, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { kind, alpha })
    }

    pub fn power_law(alpha: f64) -> Result<Self> {
        Self::new(PathLossKind::PowerLaw, alpha)
    }

    pub fn bounded(alpha: f64) -> Result<Self> {
        Self::new(PathLossKind::Bounded, alpha)
    }

    pub fn kind(&self) -> PathLossKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Same law with a different exponent.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.kind, alpha)
    }

    pub fn path_gain(&self, r: f64) -> Result<f64> {
        if r.is_nan() || r < 0.0 {
            return Err(invalid("r", format!("distance must be non-negative, got {r}")));
        }
        match self.kind {
            PathLossKind::PowerLaw if r == 0.0 => Err(Error::Singularity),
            PathLossKind::PowerLaw => Ok(r.powf(-self.alpha)),
            PathLossKind::Bounded => Ok(1.0 / (1.0 + r.powf(self.alpha))),
        }
    }

    /// Gain without argument checks, for integrands evaluated on r > 0.
    pub(crate) fn gain_unchecked(&self, r: f64) -> f64 {
        match self.kind {
            PathLossKind::PowerLaw => r.powf(-self.alpha),
            PathLossKind::Bounded => 1.0 / (1.0 + r.powf(self.alpha)),
        }
    }
}

pub fn received_power(tx_power: f64, model: &PathLossModel, r: f64) -> Result<f64> {
    if !(tx_power.is_finite() && tx_power > 0.0) {
        return Err(invalid("tx_power", format!("must be positive, got {tx_power}")));
    }
    Ok(tx_power * model.path_gain(r)?)
}

/// Signal-to-interference ratio. An empty (or all-zero) interferer set is
/// reported as [`Sir::InterferenceFree`] instead of silently becoming infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Sir {
    Finite(f64),
    InterferenceFree,
}

impl Sir {
    pub fn value(&self) -> f64 {
        match *self {
            Sir::Finite(v) => v,
            Sir::InterferenceFree => f64::INFINITY,
        }
    }
}

pub fn sir(serving_power: f64, interferer_powers: &[f64]) -> Result<Sir> {
    if !(serving_power.is_finite() && serving_power > 0.0) {
        return Err(invalid(
            "serving_power",
            format!("must be positive, got {serving_power}"),
        ));
    }
    let total: f64 = interferer_powers.iter().sum();
    if total > 0.0 {
        Ok(Sir::Finite(serving_power / total))
    } else {
        Ok(Sir::InterferenceFree)
    }
}
