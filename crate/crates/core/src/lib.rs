//! Stochastic-geometry toolkit for multi-tier (heterogeneous) cellular
//! networks: Poisson base-station and mobile-station layouts, transmit-power
//! normalization of a multi-tier network into a single-tier one, max-power and
//! interference-minimizing user association, closed-form expected
//! interference by adaptive quadrature, and a reproducible Monte Carlo engine
//! to check the closed forms against.

pub mod association;
pub mod channel;
pub mod error;
pub mod expectation;
pub mod geometry;
pub mod montecarlo;
pub mod rng;
pub mod tpnm;

pub use association::{AssociationOutcome, BsRef, Scenario};
pub use channel::{PathLossKind, PathLossModel, Sir};
pub use error::{Error, Result};
pub use expectation::{EstimateMethod, InterferenceEstimate, Quadrature};
pub use geometry::{Point, PointPattern, Tag, Window, WindowShape};
pub use montecarlo::{Execution, ExperimentSpec, ExperimentSummary, Scheme, TrialOutcome};
pub use rng::RandomStream;
pub use tpnm::{NetworkConfig, TierConfig};
