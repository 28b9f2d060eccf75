//! Max-power and interference-minimizing association on concrete realizations.
//!
//! Candidate-set geometry lives in the normalized frame anchored at the tagged
//! MS. Victim selection and victim interference use original positions and
//! tier powers under the scenario's path-loss law.

use serde::{Deserialize, Serialize};

use crate::channel::{sir, PathLossModel, Sir};
use crate::error::{Error, Result};
use crate::geometry::{nearest, sample_ppp, superpose, thin_indexed, Neighbor, Point, PointPattern, Tag, Window};
use crate::rng::RandomStream;
use crate::tpnm::{normalize_realization, NetworkConfig};

/// One network realization seen from a tagged MS.
#[derive(Debug, Clone)]
pub struct Scenario {
    bs_all: PointPattern,
    cochannel: Vec<usize>,
    bs_cochannel: PointPattern,
    ms_cochannel: PointPattern,
    tagged_ms: Point,
    config: NetworkConfig,
    path_loss: PathLossModel,
}

impl Scenario {
    /// `cochannel` holds increasing indices into `bs_all` of the BSs active on
    /// the tagged channel.
    pub fn new(
        bs_all: PointPattern,
        cochannel: Vec<usize>,
        ms_cochannel: PointPattern,
        tagged_ms: Point,
        config: NetworkConfig,
        path_loss: PathLossModel,
    ) -> Result<Self> {
        if path_loss.alpha() != config.alpha() {
            return Err(Error::InvalidScenario(format!(
                "path-loss alpha {} differs from network alpha {}",
                path_loss.alpha(),
                config.alpha()
            )));
        }
        if let Some(tag) = bs_all
            .tags()
            .iter()
            .find(|t| t.tier().is_none_or(|k| k >= config.num_tiers()))
        {
            return Err(Error::InvalidScenario(format!("BS tag {tag:?} is not a valid tier")));
        }
        if cochannel.windows(2).any(|w| w[0] >= w[1]) || cochannel.last().is_some_and(|&i| i >= bs_all.len()) {
            return Err(Error::InvalidScenario(
                "co-channel indices must be increasing and index into the BS pattern".into(),
            ));
        }
        if ms_cochannel.points().contains(&tagged_ms) {
            return Err(Error::InvalidScenario(
                "tagged MS must not be one of the co-channel MSs".into(),
            ));
        }
        if !bs_all.window().contains(&tagged_ms) {
            return Err(Error::InvalidScenario("tagged MS lies outside the window".into()));
        }
        let bs_cochannel = PointPattern::new(
            cochannel.iter().map(|&i| bs_all.points()[i]).collect(),
            cochannel.iter().map(|&i| bs_all.tags()[i]).collect(),
            *bs_all.window(),
        )?;
        Ok(Self {
            bs_all,
            cochannel,
            bs_cochannel,
            ms_cochannel,
            tagged_ms,
            config,
            path_loss,
        })
    }

    pub fn bs_all(&self) -> &PointPattern {
        &self.bs_all
    }

    pub fn cochannel_indices(&self) -> &[usize] {
        &self.cochannel
    }

    pub fn bs_cochannel(&self) -> &PointPattern {
        &self.bs_cochannel
    }

    pub fn ms_cochannel(&self) -> &PointPattern {
        &self.ms_cochannel
    }

    pub fn tagged_ms(&self) -> Point {
        self.tagged_ms
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.config
    }

    pub fn path_loss(&self) -> &PathLossModel {
        &self.path_loss
    }

    fn tier_of(&self, index: usize) -> usize {
        self.bs_all.tags()[index].tier().expect("validated in Scenario::new")
    }

    fn power_of(&self, index: usize) -> f64 {
        self.config.tiers()[self.tier_of(index)].power
    }

    /// The BS network normalized about the tagged MS.
    pub fn normalized_bs(&self) -> Result<PointPattern> {
        normalize_realization(&self.bs_all, &self.config, &self.tagged_ms)
    }

    fn bs_ref(&self, index: usize, normalized: &PointPattern) -> BsRef {
        BsRef {
            index,
            point: self.bs_all.points()[index],
            tier: self.tier_of(index),
            normalized_distance: normalized.points()[index].distance(&self.tagged_ms),
        }
    }

    fn worst_victim(&self, bs: &Point) -> Option<Neighbor> {
        nearest(&self.ms_cochannel, bs, Some(&self.tagged_ms))
    }

    fn victim_interference(&self, index: usize, victim: Option<&Neighbor>) -> Result<f64> {
        match victim {
            Some(v) => Ok(self.power_of(index) * self.path_loss.path_gain(v.distance)?),
            None => Ok(0.0),
        }
    }

    /// SIR at the tagged MS with every other co-channel BS interfering.
    fn sir_at_tagged(&self, serving: usize) -> Result<Sir> {
        let signal = self.power_of(serving)
            * self
                .path_loss
                .path_gain(self.bs_all.points()[serving].distance(&self.tagged_ms))?;
        let interferers = self
            .cochannel
            .iter()
            .filter(|&&i| i != serving)
            .map(|&i| {
                Ok(self.power_of(i)
                    * self
                        .path_loss
                        .path_gain(self.bs_all.points()[i].distance(&self.tagged_ms))?)
            })
            .collect::<Result<Vec<f64>>>()?;
        if signal > 0.0 {
            sir(signal, &interferers)
        } else {
            // Only reachable when the serving BS is so far that the gain underflows.
            Ok(Sir::Finite(0.0))
        }
    }
}

/// A base station identified by its index in [`Scenario::bs_all`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsRef {
    pub index: usize,
    /// Original (unscaled) position.
    pub point: Point,
    pub tier: usize,
    /// Distance from the tagged MS in the normalized frame.
    pub normalized_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssociationOutcome {
    /// `None` when the candidate set is empty and the MS is blocked.
    pub serving: Option<BsRef>,
    pub candidate_set: Vec<BsRef>,
    pub worst_victim: Option<Point>,
    /// Interference from the serving BS at its worst victim (0 if blocked or no victim).
    pub victim_interference: f64,
    pub sir_at_tagged: Option<Sir>,
}

impl AssociationOutcome {
    pub fn is_blocked(&self) -> bool {
        self.serving.is_none()
    }
}

/// Index of the BS with the largest `P_k |x - y|^-alpha` at the tagged MS.
/// Ties go to the lowest index.
pub fn max_power_index_original(scenario: &Scenario) -> Option<usize> {
    let y = scenario.tagged_ms;
    let alpha = scenario.config.alpha();
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in scenario.bs_all.points().iter().enumerate() {
        let power = scenario.power_of(i) * p.distance(&y).powf(-alpha);
        if best.is_none_or(|(_, b)| power > b) {
            best = Some((i, power));
        }
    }
    best.map(|(i, _)| i)
}

/// Index of the BS nearest to the tagged MS in the normalized frame.
pub fn max_power_index_normalized(scenario: &Scenario) -> Result<Option<usize>> {
    let normalized = scenario.normalized_bs()?;
    Ok(nearest(&normalized, &scenario.tagged_ms, None).map(|n| n.index))
}

fn candidates_in(scenario: &Scenario, normalized: &PointPattern) -> Vec<BsRef> {
    let y = scenario.tagged_ms;
    let void = scenario
        .cochannel
        .iter()
        .map(|&i| normalized.points()[i].distance(&y))
        .fold(f64::INFINITY, f64::min);
    (0..scenario.bs_all.len())
        .map(|i| scenario.bs_ref(i, normalized))
        .filter(|b| b.normalized_distance <= void)
        .collect()
}

/// BSs no farther from the tagged MS than the nearest co-channel BS, both
/// measured in the normalized frame. With no co-channel BS, every BS qualifies.
pub fn candidate_set(scenario: &Scenario) -> Result<Vec<BsRef>> {
    let normalized = scenario.normalized_bs()?;
    Ok(candidates_in(scenario, &normalized))
}

/// Conventional association: the BS delivering the highest received power.
pub fn associate_max_power(scenario: &Scenario) -> Result<AssociationOutcome> {
    let normalized = scenario.normalized_bs()?;
    let serving = max_power_index_original(scenario)
        .ok_or_else(|| Error::InvalidScenario("no base stations in the scenario".into()))?;
    debug_assert_eq!(
        nearest(&normalized, &scenario.tagged_ms, None).map(|n| n.index),
        Some(serving),
        "max received power must be the nearest normalized BS"
    );
    let victim = scenario.worst_victim(&scenario.bs_all.points()[serving]);
    Ok(AssociationOutcome {
        serving: Some(scenario.bs_ref(serving, &normalized)),
        candidate_set: candidates_in(scenario, &normalized),
        worst_victim: victim.map(|v| v.point),
        victim_interference: scenario.victim_interference(serving, victim.as_ref())?,
        sir_at_tagged: Some(scenario.sir_at_tagged(serving)?),
    })
}

/// Interference-minimizing association: among the candidates, the BS whose
/// interference at its own nearest co-channel MS is smallest. Ties prefer the
/// candidate nearer the tagged MS in the normalized frame, then lower index.
pub fn associate_interference_min(scenario: &Scenario) -> Result<AssociationOutcome> {
    let normalized = scenario.normalized_bs()?;
    let candidates = candidates_in(scenario, &normalized);

    let mut best: Option<(BsRef, Option<Neighbor>, f64)> = None;
    for c in &candidates {
        let victim = scenario.worst_victim(&c.point);
        let interference = scenario.victim_interference(c.index, victim.as_ref())?;
        let better = match &best {
            None => true,
            Some((b, _, bi)) => {
                interference < *bi
                    || (interference == *bi && (c.normalized_distance, c.index) < (b.normalized_distance, b.index))
            }
        };
        if better {
            best = Some((*c, victim, interference));
        }
    }

    match best {
        None => Ok(AssociationOutcome {
            serving: None,
            candidate_set: candidates,
            worst_victim: None,
            victim_interference: 0.0,
            sir_at_tagged: None,
        }),
        Some((serving, victim, interference)) => Ok(AssociationOutcome {
            sir_at_tagged: Some(scenario.sir_at_tagged(serving.index)?),
            serving: Some(serving),
            candidate_set: candidates,
            worst_victim: victim.map(|v| v.point),
            victim_interference: interference,
        }),
    }
}

const BS_STREAM: u64 = 0;
const THIN_STREAM: u64 = 1 << 32;
const MS_STREAM: u64 = 2 << 32;

/// Samples every tier, thins the union to the co-channel set, samples the
/// co-channel MSs and pins the tagged MS at the window center.
pub fn realize_scenario(
    config: &NetworkConfig,
    path_loss: &PathLossModel,
    window: &Window,
    stream: &RandomStream,
) -> Result<Scenario> {
    let tiers = config
        .tiers()
        .iter()
        .enumerate()
        .map(|(k, t)| {
            sample_ppp(
                t.intensity,
                window,
                Tag::Tier(k),
                &mut stream.split(BS_STREAM + k as u64),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let bs_all = superpose(&tiers)?;
    let (_, cochannel) = thin_indexed(&bs_all, config.cochannel_fraction(), &mut stream.split(THIN_STREAM))?;
    let ms = sample_ppp(config.ms_intensity(), window, Tag::Ms, &mut stream.split(MS_STREAM))?;
    Scenario::new(bs_all, cochannel, ms, window.center(), config.clone(), *path_loss)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tpnm::TierConfig;

    fn window() -> Window {
        Window::square(Point::ORIGIN, 20.0).unwrap()
    }

    fn tiers_config(powers: &[f64], fraction: f64) -> NetworkConfig {
        NetworkConfig::paired(
            powers
                .iter()
                .map(|&p| TierConfig {
                    power: p,
                    intensity: 0.1,
                })
                .collect(),
            4.0,
            fraction,
        )
        .unwrap()
    }

    fn scenario(bs: &[(f64, f64, usize)], cochannel: Vec<usize>, ms: &[(f64, f64)], config: NetworkConfig) -> Scenario {
        let w = window();
        let bs_all = PointPattern::new(
            bs.iter().map(|&(x, y, _)| Point::new(x, y)).collect(),
            bs.iter().map(|&(_, _, k)| Tag::Tier(k)).collect(),
            w,
        )
        .unwrap();
        let ms = PointPattern::new(
            ms.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            vec![Tag::Ms; ms.len()],
            w,
        )
        .unwrap();
        let model = PathLossModel::bounded(config.alpha()).unwrap();
        Scenario::new(bs_all, cochannel, ms, Point::ORIGIN, config, model).unwrap()
    }

    #[test]
    fn single_bs_is_selected() {
        let s = scenario(&[(3.0, 0.0, 0)], vec![0], &[(4.0, 0.0)], tiers_config(&[1.0], 1.0));
        let out = associate_max_power(&s).unwrap();
        assert_eq!(out.serving.unwrap().index, 0);
        assert_eq!(out.worst_victim, Some(Point::new(4.0, 0.0)));
        assert!((out.victim_interference - 0.5).abs() < 1e-15);
        assert_eq!(out.sir_at_tagged, Some(Sir::InterferenceFree));
    }

    #[test]
    fn equal_powers_pick_nearer() {
        let s = scenario(&[(3.0, 0.0, 0), (0.0, 2.0, 0)], vec![0], &[], tiers_config(&[1.0], 0.5));
        assert_eq!(associate_max_power(&s).unwrap().serving.unwrap().index, 1);
    }

    #[test]
    fn weaker_but_nearer_wins() {
        // A: P = 10 at d = 2 gives 0.625; B: P = 1 at d = 1 gives 1.
        let s = scenario(
            &[(2.0, 0.0, 0), (0.0, 1.0, 1)],
            vec![0, 1],
            &[],
            tiers_config(&[10.0, 1.0], 0.5),
        );
        assert_eq!(associate_max_power(&s).unwrap().serving.unwrap().index, 1);
        assert_eq!(max_power_index_normalized(&s).unwrap(), Some(1));
    }

    #[test]
    fn empty_bs_set_is_an_error() {
        let s = scenario(&[], vec![], &[], tiers_config(&[1.0], 0.5));
        assert!(matches!(associate_max_power(&s), Err(Error::InvalidScenario(_))));
        let out = associate_interference_min(&s).unwrap();
        assert!(out.is_blocked());
        assert!(out.candidate_set.is_empty());
    }

    #[test]
    fn no_cochannel_bs_admits_everyone() {
        let s = scenario(
            &[(1.0, 0.0, 0), (5.0, 0.0, 0), (-9.0, 3.0, 0)],
            vec![],
            &[],
            tiers_config(&[1.0], 0.5),
        );
        assert_eq!(candidate_set(&s).unwrap().len(), 3);
    }

    #[test]
    fn candidate_boundary_is_inclusive() {
        // Unit powers: normalized distances equal original ones.
        let s = scenario(
            &[(1.0, 0.0, 0), (0.0, 1.5, 0), (-3.0, 0.0, 0), (0.0, -2.0, 0)],
            vec![3],
            &[],
            tiers_config(&[1.0], 0.5),
        );
        let idx: Vec<usize> = candidate_set(&s).unwrap().iter().map(|b| b.index).collect();
        assert_eq!(idx, vec![0, 1, 3]);
    }

    #[test]
    fn farthest_victim_wins_with_equal_powers() {
        // Candidate 0 has a victim at 0.5, candidate 1 at 2.0.
        let s = scenario(
            &[(1.0, 0.0, 0), (-1.0, 0.0, 0), (0.0, 1.2, 0)],
            vec![2],
            &[(1.5, 0.0), (-3.0, 0.0)],
            tiers_config(&[1.0], 0.5),
        );
        let out = associate_interference_min(&s).unwrap();
        assert_eq!(out.serving.unwrap().index, 1);
        assert_eq!(out.worst_victim, Some(Point::new(-3.0, 0.0)));
        let expected = 1.0 / (1.0 + 2f64.powi(4));
        assert!((out.victim_interference - expected).abs() < 1e-15);
    }

    #[test]
    fn no_victims_falls_back_to_strongest_candidate() {
        let s = scenario(
            &[(2.0, 0.0, 0), (1.0, 0.0, 0), (0.0, 3.0, 0)],
            vec![2],
            &[],
            tiers_config(&[1.0], 0.5),
        );
        let out = associate_interference_min(&s).unwrap();
        assert_eq!(out.serving.unwrap().index, 1);
        assert_eq!(out.victim_interference, 0.0);
        assert_eq!(out.worst_victim, None);
    }

    #[test]
    fn single_candidate_matches_conventional() {
        let s = scenario(
            &[(1.0, 0.0, 0), (4.0, 0.0, 0)],
            vec![0, 1],
            &[(2.0, 0.5), (-1.0, -1.0)],
            tiers_config(&[1.0], 0.5),
        );
        let a = associate_max_power(&s).unwrap();
        let b = associate_interference_min(&s).unwrap();
        assert_eq!(b.candidate_set.len(), 1);
        assert_eq!(a.serving, b.serving);
        assert_eq!(a.victim_interference, b.victim_interference);
        assert_eq!(a.sir_at_tagged, b.sir_at_tagged);
    }

    #[test]
    fn sir_counts_other_cochannel_bs_only() {
        let s = scenario(
            &[(1.0, 0.0, 0), (2.0, 0.0, 0), (0.0, 3.0, 0)],
            vec![1],
            &[],
            tiers_config(&[1.0], 0.5),
        );
        let out = associate_max_power(&s).unwrap();
        let expected = 0.5 / (1.0 / 17.0);
        match out.sir_at_tagged.unwrap() {
            Sir::Finite(v) => assert!((v - expected).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scenario_validation() {
        let w = window();
        let config = tiers_config(&[1.0], 0.5);
        let model = PathLossModel::bounded(4.0).unwrap();
        let bs = PointPattern::new(vec![Point::new(1.0, 0.0)], vec![Tag::Tier(0)], w).unwrap();
        let ms_at_y = PointPattern::new(vec![Point::ORIGIN], vec![Tag::Ms], w).unwrap();
        let empty = PointPattern::empty(w);
        assert!(Scenario::new(bs.clone(), vec![0], ms_at_y, Point::ORIGIN, config.clone(), model).is_err());
        assert!(Scenario::new(bs.clone(), vec![1], empty.clone(), Point::ORIGIN, config.clone(), model).is_err());
        assert!(Scenario::new(
            bs.clone(),
            vec![0],
            empty.clone(),
            Point::ORIGIN,
            config.clone(),
            PathLossModel::bounded(3.0).unwrap()
        )
        .is_err());
        let bad_tier = PointPattern::new(vec![Point::new(1.0, 0.0)], vec![Tag::Tier(1)], w).unwrap();
        assert!(Scenario::new(bad_tier, vec![], empty, Point::ORIGIN, config, model).is_err());
    }

    #[test]
    fn realize_is_deterministic_and_consistent() {
        let config = NetworkConfig::three_tier_reference();
        let model = PathLossModel::bounded(4.0).unwrap();
        let stream = RandomStream::new(99);
        let a = realize_scenario(&config, &model, &window(), &stream).unwrap();
        let b = realize_scenario(&config, &model, &window(), &stream).unwrap();
        assert_eq!(a.bs_all(), b.bs_all());
        assert_eq!(a.cochannel_indices(), b.cochannel_indices());
        assert_eq!(a.ms_cochannel(), b.ms_cochannel());
        assert_eq!(a.tagged_ms(), Point::ORIGIN);
        for (j, &i) in a.cochannel_indices().iter().enumerate() {
            assert_eq!(a.bs_cochannel().points()[j], a.bs_all().points()[i]);
        }
    }

    #[test]
    fn full_cochannel_fraction_keeps_everything() {
        let config = NetworkConfig::three_tier_reference()
            .with_cochannel_fraction(1.0)
            .unwrap();
        let model = PathLossModel::bounded(4.0).unwrap();
        let s = realize_scenario(&config, &model, &window(), &RandomStream::new(5)).unwrap();
        assert_eq!(s.bs_cochannel(), s.bs_all());
    }
}
