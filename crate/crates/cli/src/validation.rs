//! Self-checks of the model code: each check returns the statistic it
//! measured next to the bound it must stay under.

use hetnet_core::association::{
    associate_interference_min, associate_max_power, max_power_index_normalized, max_power_index_original,
    realize_scenario,
};
use hetnet_core::expectation::{
    candidate_count_by_integral, expected_interference_conventional, expected_interference_proposed,
    integrate_log_substituted, integrate_rayleigh, mean_candidate_count, mean_candidate_count_by_integral, r_opt_pdf,
    tier_power_prefactor, victim_distance_pdf, void_distance_pdf,
};
use hetnet_core::montecarlo::{
    ks_critical_value, ks_statistic, run_trials, sample_max_received_power, sample_nearest_distance,
};
use hetnet_core::tpnm::{
    max_power_cdf_direct, max_power_cdf_tpnm, min_d_pdf, nearest_distance_cdf, nearest_distance_pdf,
    normalize_realization, tier_power_pdf, tier_scaled_distance_pdf,
};
use hetnet_core::{
    Execution, ExperimentSpec, NetworkConfig, PathLossModel, Point, PointPattern, Quadrature, RandomStream, Scheme,
    Tag, Window,
};
use serde::Serialize;

use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub statistic: f64,
    pub threshold: f64,
    pub detail: String,
}

impl CheckResult {
    /// Passes when `statistic < threshold`.
    pub fn below(name: &str, statistic: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: statistic < threshold,
            statistic,
            threshold,
            detail: detail.into(),
        }
    }

    /// Passes when `statistic == 0`.
    pub fn zero(name: &str, statistic: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: statistic == 0.0,
            statistic,
            threshold: 0.0,
            detail: detail.into(),
        }
    }

    pub fn failed(name: &str, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: false,
            statistic: f64::NAN,
            threshold: f64::NAN,
            detail: detail.into(),
        }
    }

    /// JSON object on one line; non-finite numbers become `null`.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("check results serialize")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, result: CliResult<CheckResult>) {
        self.checks
            .push(result.unwrap_or_else(|e| CheckResult::failed(name, e.to_string())));
    }
}

/// `n` points log-spaced over `[lo, hi]`, endpoints included.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Largest gap between the direct and normalized max-power CDFs.
pub fn route_equivalence(config: &NetworkConfig, alphas: &[f64], grid: &[f64]) -> CliResult<CheckResult> {
    let mut worst = 0.0f64;
    for &alpha in alphas {
        let c = config.with_alpha(alpha)?;
        for &p in grid {
            worst = worst.max((max_power_cdf_direct(p, &c)? - max_power_cdf_tpnm(p, &c)?).abs());
        }
    }
    Ok(CheckResult::below(
        "tpnm_route_equivalence",
        worst,
        1e-12,
        format!("{} alphas x {} powers", alphas.len(), grid.len()),
    ))
}

/// Received power at the anchor before and after normalization, over `n`
/// uniformly placed points with uniformly drawn tiers.
pub fn pointwise_exactness(config: &NetworkConfig, n: usize, seed: u64) -> CliResult<CheckResult> {
    let window = Window::square(Point::ORIGIN, 10.0)?;
    let mut stream = RandomStream::new(seed);
    let k_max = config.num_tiers();
    let mut points = Vec::with_capacity(n);
    let mut tags = Vec::with_capacity(n);
    for _ in 0..n {
        points.push(window.sample_uniform(&mut stream));
        tags.push(Tag::Tier(((stream.uniform() * k_max as f64) as usize).min(k_max - 1)));
    }
    let pattern = PointPattern::new(points, tags, window)?;
    let anchor = Point::new(1.5, -2.5);
    let image = normalize_realization(&pattern, config, &anchor)?;
    let alpha = config.alpha();
    let mut worst = 0.0f64;
    for ((x, tag), (x_img, _)) in pattern.iter().zip(image.iter()) {
        let power = config.tiers()[tag.tier().expect("tier tag")].power;
        let original = power * x.distance(&anchor).powf(-alpha);
        let normalized = x_img.distance(&anchor).powf(-alpha);
        worst = worst.max(((original - normalized) / original).abs());
    }
    Ok(CheckResult::below(
        "tpnm_pointwise_exactness",
        worst,
        1e-12,
        format!("{n} points"),
    ))
}

/// Fraction of sampled networks where the strongest BS is not the nearest
/// normalized BS. Must be exactly zero.
pub fn argmax_invariance(config: &NetworkConfig, networks: usize, seed: u64) -> CliResult<CheckResult> {
    let path_loss = PathLossModel::power_law(config.alpha())?;
    let window = Window::square(Point::ORIGIN, 10.0)?;
    let root = RandomStream::new(seed);
    let mut mismatches = 0usize;
    for i in 0..networks {
        let scenario = realize_scenario(config, &path_loss, &window, &root.split(i as u64))?;
        if max_power_index_original(&scenario) != max_power_index_normalized(&scenario)? {
            mismatches += 1;
        }
    }
    Ok(CheckResult::zero(
        "argmax_invariance",
        mismatches as f64 / networks as f64,
        format!("{mismatches} mismatches in {networks} networks"),
    ))
}

pub fn ks_nearest_distance(intensity: f64, samples: usize, seed: u64) -> CliResult<CheckResult> {
    let window = Window::square(Point::ORIGIN, 10.0_f64.max(8.0 / intensity.sqrt()))?;
    let root = RandomStream::new(seed);
    let mut xs = Vec::with_capacity(samples);
    for i in 0..samples {
        if let Some(r) = sample_nearest_distance(intensity, &window, &mut root.split(i as u64))? {
            xs.push(r);
        }
    }
    let d = ks_statistic(&xs, |r| nearest_distance_cdf(r, intensity))?;
    Ok(CheckResult::below(
        "ks_nearest_distance",
        d,
        ks_critical_value(xs.len()),
        format!("n = {}, intensity = {intensity}", xs.len()),
    ))
}

/// Strongest received power at the window center against the max-power CDF.
pub fn ks_max_power(config: &NetworkConfig, samples: usize, halfwidth: f64, seed: u64) -> CliResult<CheckResult> {
    let window = Window::square(Point::ORIGIN, halfwidth)?;
    let root = RandomStream::new(seed);
    let mut xs = Vec::with_capacity(samples);
    for i in 0..samples {
        if let Some(p) = sample_max_received_power(config, &window, &root.split(i as u64))? {
            xs.push(p);
        }
    }
    let d = ks_statistic(&xs, |p| max_power_cdf_tpnm(p, config).unwrap_or(f64::NAN))?;
    Ok(CheckResult::below(
        "ks_max_received_power",
        d,
        ks_critical_value(xs.len()),
        format!("n = {}, alpha = {}", xs.len(), config.alpha()),
    ))
}

/// Largest deviation from 1 of the total mass of every density in the model.
pub fn pdf_normalizations(config: &NetworkConfig, quad: &Quadrature) -> CliResult<CheckResult> {
    let mut masses: Vec<(String, f64)> = Vec::new();
    for (k, t) in config.tiers().iter().enumerate() {
        let nearest = integrate_rayleigh(|r| nearest_distance_pdf(r, t.intensity), t.intensity, quad)?;
        masses.push((format!("nearest_distance[{k}]"), nearest.value));
        let power = integrate_log_substituted(|p| tier_power_pdf(p, k, config).unwrap_or(f64::NAN), quad)?;
        masses.push((format!("tier_power[{k}]"), power.value));
        let lk = config.normalized_tier_intensity(k)?;
        let scaled = integrate_rayleigh(|d| tier_scaled_distance_pdf(d, k, config).unwrap_or(f64::NAN), lk, quad)?;
        masses.push((format!("tier_scaled_distance[{k}]"), scaled.value));
    }
    let normalized = config.normalized_intensity();
    masses.push((
        "min_scaled_distance".into(),
        integrate_rayleigh(|d| min_d_pdf(d, config), normalized, quad)?.value,
    ));
    let ms = config.ms_intensity();
    masses.push((
        "victim_distance".into(),
        integrate_rayleigh(|r| victim_distance_pdf(r, ms), ms, quad)?.value,
    ));
    let void = config.cochannel_fraction() * normalized;
    masses.push((
        "void_distance".into(),
        integrate_rayleigh(|r| void_distance_pdf(r, void), void, quad)?.value,
    ));
    for n_ty in [1.0, 3.0, 8.0] {
        let mass = integrate_rayleigh(|r| r_opt_pdf(r, ms, n_ty).unwrap_or(f64::NAN), ms, quad)?;
        masses.push((format!("r_opt[n_ty={n_ty}]"), mass.value));
    }
    let (name, worst) = masses
        .iter()
        .map(|(n, m)| (n.as_str(), (m - 1.0).abs()))
        .fold(("", 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    Ok(CheckResult::below(
        "pdf_normalizations",
        worst,
        1e-8,
        format!("{} densities; worst {name}", masses.len()),
    ))
}

/// Mean candidate-set size by quadrature against `1 / cochannel_fraction`,
/// over each `(normalized intensity, cochannel fraction)` pair.
pub fn candidate_count_routes(settings: &[(f64, f64)], quad: &Quadrature) -> CliResult<CheckResult> {
    let mut worst = 0.0f64;
    for &(normalized, fraction) in settings {
        let by_integral = candidate_count_by_integral(normalized, fraction * normalized, quad)?;
        worst = worst.max((by_integral - 1.0 / fraction).abs());
    }
    Ok(CheckResult::below(
        "candidate_count_routes",
        worst,
        1e-8,
        format!("{} settings", settings.len()),
    ))
}

pub fn prefactor_unity(config: &NetworkConfig) -> CheckResult {
    let value = tier_power_prefactor(config);
    CheckResult::below(
        "prefactor_unity",
        (value - 1.0).abs(),
        1e-9,
        format!("prefactor = {value}"),
    )
}

/// Proposed oracle at one candidate against the conventional oracle, and
/// the two schemes' per-trial outcomes with every BS on the tagged channel.
pub fn degeneracy(config: &NetworkConfig, trials: usize, seed: u64, quad: &Quadrature) -> CliResult<CheckResult> {
    let path_loss = PathLossModel::bounded(config.alpha())?;
    let conventional = expected_interference_conventional(config, &path_loss, quad)?.value;
    let proposed = expected_interference_proposed(config, &path_loss, 1.0, quad)?.value;
    let oracle_gap = ((proposed - conventional) / conventional).abs();

    let spec = ExperimentSpec {
        config: config.with_cochannel_fraction(1.0)?,
        scheme: Scheme::MaxPower,
        path_loss,
        trials,
        seed,
        window_halfwidth: None,
    };
    let a = run_trials(&spec, Execution::Parallel)?;
    let b = run_trials(&spec.with_scheme(Scheme::InterferenceMin), Execution::Parallel)?;
    let differing = a.iter().zip(&b).filter(|(x, y)| x != y).count();
    let mut check = CheckResult::below(
        "degeneracy",
        oracle_gap,
        1e-10,
        format!("{differing} of {trials} trials differ at cochannel_fraction = 1"),
    );
    check.passed &= differing == 0;
    Ok(check)
}

/// Proposed oracle strictly below conventional at every alpha.
pub fn oracle_ordering(config: &NetworkConfig, alphas: &[f64], quad: &Quadrature) -> CliResult<CheckResult> {
    let n_ty = mean_candidate_count(config);
    let mut worst_ratio = 0.0f64;
    for &alpha in alphas {
        let c = config.with_alpha(alpha)?;
        let path_loss = PathLossModel::bounded(alpha)?;
        let conventional = expected_interference_conventional(&c, &path_loss, quad)?.value;
        let proposed = expected_interference_proposed(&c, &path_loss, n_ty, quad)?.value;
        worst_ratio = worst_ratio.max(proposed / conventional);
    }
    Ok(CheckResult::below(
        "oracle_ordering",
        worst_ratio,
        1.0,
        format!("max proposed/conventional over {} alphas", alphas.len()),
    ))
}

/// Interference-minimizing association never blocks and never does worse
/// than max-power association on the same realization.
pub fn dominance(config: &NetworkConfig, networks: usize, seed: u64) -> CliResult<CheckResult> {
    let path_loss = PathLossModel::bounded(config.alpha())?;
    let window = Window::square(Point::ORIGIN, 10.0)?;
    let root = RandomStream::new(seed);
    let (mut blocked, mut worse) = (0usize, 0usize);
    let mut worst_excess = 0.0f64;
    for i in 0..networks {
        let scenario = realize_scenario(config, &path_loss, &window, &root.split(i as u64))?;
        let conventional = associate_max_power(&scenario)?;
        let proposed = associate_interference_min(&scenario)?;
        if proposed.is_blocked() {
            blocked += 1;
            continue;
        }
        let excess = proposed.victim_interference - conventional.victim_interference;
        if excess > 0.0 {
            worse += 1;
            worst_excess = worst_excess.max(excess);
        }
    }
    let mut check = CheckResult::zero(
        "dominance_no_blocking",
        worst_excess,
        format!("{blocked} blocked, {worse} worse in {networks} networks"),
    );
    check.passed &= blocked == 0;
    Ok(check)
}

/// Runs every check at its default size with the three-tier reference network.
pub fn run_validation() -> ValidationReport {
    let config = NetworkConfig::three_tier_reference();
    let quad = Quadrature::default();
    let mut report = ValidationReport::default();
    let grid = log_grid(1e-3, 1e3, 1000);
    let alphas = [2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0];
    report.push(
        "tpnm_route_equivalence",
        route_equivalence(&config, &[2.5, 3.0, 4.0, 6.0], &grid),
    );
    report.push("tpnm_pointwise_exactness", pointwise_exactness(&config, 1000, 11));
    report.push("argmax_invariance", argmax_invariance(&config, 1000, 12));
    report.push(
        "ks_nearest_distance",
        ks_nearest_distance(config.ms_intensity(), 10_000, 13),
    );
    report.push("ks_max_received_power", ks_max_power(&config, 10_000, 10.0, 14));
    report.push("degeneracy", degeneracy(&config, 1000, 15, &quad));
    report.push("oracle_ordering", oracle_ordering(&config, &alphas, &quad));
    report.push("dominance_no_blocking", dominance(&config, 1000, 16));
    report.push("pdf_normalizations", pdf_normalizations(&config, &quad));
    let normalized = config.normalized_intensity();
    report.push(
        "candidate_count_routes",
        candidate_count_routes(&[(normalized, 1.0 / 3.0), (1.0, 0.5), (0.05, 0.125)], &quad).and_then(|c| {
            let direct = mean_candidate_count_by_integral(&config, &quad)?;
            let mut c = c;
            c.passed &= (direct - mean_candidate_count(&config)).abs() < 1e-8;
            Ok(c)
        }),
    );
    report.checks.push(prefactor_unity(&config));
    report
}
