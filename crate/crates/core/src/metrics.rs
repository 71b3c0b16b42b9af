//! Error, stability and robustness metrics against ground truth.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::image::{EdgeImage, FPoint, Point};
use crate::method::Method;
use crate::oracle::GroundTruth;
use crate::raycast::{EstimatorConfig, Features};

/// Warm-up runs before timing.
pub const WARMUP_RUNS: usize = 1;
/// Minimum timed repetitions per measurement.
pub const MIN_REPETITIONS: usize = 5;

/// Converts a method's raw area onto a shared pixel-area axis.
///
/// `method` is one of the CLI method names.
pub fn comparable_area(method: &str, raw_area: f64, cfg: &EstimatorConfig) -> Result<f64> {
    Ok(method.parse::<Method>()?.comparable_area(raw_area, cfg))
}

/// Median wall-clock nanoseconds of `f` over `max(reps, 5)` runs after one
/// warm-up, never below 1.
pub fn median_runtime_ns<T>(reps: usize, mut f: impl FnMut() -> T) -> u64 {
    for _ in 0..WARMUP_RUNS {
        std::hint::black_box(f());
    }
    let mut samples: Vec<u64> = (0..reps.max(MIN_REPETITIONS))
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(f());
            start.elapsed().as_nanos() as u64
        })
        .collect();
    samples.sort_unstable();
    samples[samples.len() / 2].max(1)
}

/// Per-seed results of running one estimator from several inner points.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub features: Vec<Features>,
    pub centroid_errors: Vec<f64>,
    /// Largest distance between any two estimated centroids.
    pub inner_stability: f64,
}

pub fn max_pairwise_distance(points: &[FPoint]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            worst = worst.max(a.distance(*b));
        }
    }
    worst
}

pub fn stability_sweep(
    image: &EdgeImage,
    seeds: &[Point],
    method: Method,
    cfg: &EstimatorConfig,
    truth_centroid: FPoint,
) -> Result<StabilityReport> {
    if seeds.is_empty() {
        return Err(Error::Argument("stability sweep needs at least one seed".into()));
    }
    let features = seeds
        .iter()
        .map(|&s| method.estimate(image, s, cfg))
        .collect::<Result<Vec<_>>>()?;
    let centroids: Vec<FPoint> = features.iter().map(|f| f.centroid).collect();
    Ok(StabilityReport {
        centroid_errors: centroids.iter().map(|c| c.distance(truth_centroid)).collect(),
        inner_stability: max_pairwise_distance(&centroids),
        features,
    })
}

/// One benchmark observation.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub method: Method,
    pub cfg: EstimatorConfig,
    pub scene: String,
    pub seed: u64,
    /// Inner point the estimate started from.
    pub inner: Point,
    pub centroid: FPoint,
    pub centroid_error: f64,
    pub area_raw: f64,
    pub area_comparable: f64,
    /// `area_comparable / truth - 1`.
    pub area_error: f64,
    pub inner_stability: f64,
    pub leak: bool,
    pub iterations: usize,
    pub converged: bool,
    pub work_counter: u64,
    pub runtime_ns: u64,
}

impl MetricsRow {
    pub const COLUMNS: [&'static str; 20] = [
        "method",
        "n",
        "y",
        "m",
        "max_iter",
        "scene",
        "seed",
        "inner_x",
        "inner_y",
        "centroid_x",
        "centroid_y",
        "centroid_error",
        "area_raw",
        "area_comparable",
        "inner_stability",
        "leak",
        "iterations",
        "converged",
        "work_counter",
        "runtime_ns",
    ];

    /// Field values formatted for output, in [`MetricsRow::COLUMNS`] order.
    pub fn values(&self) -> Vec<String> {
        vec![
            self.method.name().to_string(),
            self.cfg.n.to_string(),
            self.cfg.y.to_string(),
            self.cfg.m.to_string(),
            self.cfg.max_iter.to_string(),
            self.scene.clone(),
            self.seed.to_string(),
            self.inner.x.to_string(),
            self.inner.y.to_string(),
            format!("{:.3}", self.centroid.x),
            format!("{:.3}", self.centroid.y),
            format!("{:.6}", self.centroid_error),
            format!("{:.6}", self.area_raw),
            format!("{:.6}", self.area_comparable),
            format!("{:.6}", self.inner_stability),
            self.leak.to_string(),
            self.iterations.to_string(),
            self.converged.to_string(),
            self.work_counter.to_string(),
            self.runtime_ns.to_string(),
        ]
    }
}

/// Inputs for one [`evaluate`] call.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    /// Image the estimator sees (possibly noisy).
    pub image: &'a EdgeImage,
    pub truth: &'a GroundTruth,
    /// First seed is the primary inner point; all seeds feed the stability metric.
    pub seeds: &'a [Point],
    pub scene: &'a str,
    pub seed: u64,
    pub repetitions: usize,
}

/// Runs `method` from the primary inner point, measures it, and computes
/// stability across all seeds.
pub fn evaluate(obs: Observation<'_>, method: Method, cfg: &EstimatorConfig) -> Result<MetricsRow> {
    let inner = *obs
        .seeds
        .first()
        .ok_or_else(|| Error::Argument("no inner point".into()))?;
    let stability = stability_sweep(obs.image, obs.seeds, method, cfg, obs.truth.centroid)?;
    let features = &stability.features[0];
    let runtime_ns = median_runtime_ns(obs.repetitions, || method.estimate(obs.image, inner, cfg));
    let area_comparable = method.comparable_area_of(features, cfg);
    Ok(MetricsRow {
        method,
        cfg: *cfg,
        scene: obs.scene.to_string(),
        seed: obs.seed,
        inner,
        centroid: features.centroid,
        centroid_error: stability.centroid_errors[0],
        area_raw: features.area,
        area_comparable,
        area_error: area_comparable / obs.truth.area as f64 - 1.0,
        inner_stability: stability.inner_stability,
        leak: features.diagnostics.leaked,
        iterations: features.iterations,
        converged: features.converged,
        work_counter: method.work_counter(features),
        runtime_ns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{generate, HandSpec, SceneSpec};

    #[test]
    fn comparable_area_rules() {
        let cfg = EstimatorConfig::default();
        assert_eq!(comparable_area("pixel-fill", 1521.0, &cfg).unwrap(), 1521.0);
        assert_eq!(comparable_area("ny-raster", 640.0, &cfg).unwrap(), 640.0);
        assert_eq!(comparable_area("grid-fill", 15.0, &cfg).unwrap(), 64.0);
        let r = comparable_area("nray", 32.0 * 29.0, &cfg).unwrap();
        assert!((r - std::f64::consts::PI * 841.0).abs() < 1e-9);
        assert!(matches!(comparable_area("bogus", 1.0, &cfg), Err(Error::Argument(_))));
    }

    #[test]
    fn n_ray_comparable_area_near_truth() {
        let s = generate(&SceneSpec::circle(101, 101, Point::new(50, 50), 30)).unwrap();
        let cfg = EstimatorConfig::default();
        let f = Method::NRay.estimate(&s.image, s.inner, &cfg).unwrap();
        let a = comparable_area("nray", f.area, &cfg).unwrap();
        assert!((a - s.truth.area as f64).abs() < 0.10 * s.truth.area as f64, "{a}");
    }

    #[test]
    fn pixel_fill_is_seed_invariant() {
        let s = generate(&SceneSpec::circle(101, 101, Point::new(50, 50), 30)).unwrap();
        let cfg = EstimatorConfig::default();
        let r = stability_sweep(&s.image, &s.seed_points(), Method::PixelFill, &cfg, s.truth.centroid).unwrap();
        assert_eq!(r.inner_stability, 0.0);
        let one = stability_sweep(&s.image, &[s.inner], Method::NRay, &cfg, s.truth.centroid).unwrap();
        assert_eq!(one.inner_stability, 0.0);
        assert!(stability_sweep(&s.image, &[], Method::NRay, &cfg, s.truth.centroid).is_err());
    }

    #[test]
    fn rays_less_stable_than_grid_on_hand() {
        let s = generate(&SceneSpec::hand(
            201,
            201,
            Point::new(100, 120),
            HandSpec {
                palm_radius: 35,
                fingers: 4,
                finger_length: 50.0,
                finger_width: 12.0,
                rotation: 0.0,
            },
        ))
        .unwrap();
        let seeds = [s.inner, s.fingertip.unwrap()];
        let cfg = EstimatorConfig::default();
        let rays = stability_sweep(&s.image, &seeds, Method::NRay, &cfg, s.truth.centroid).unwrap();
        let grid = stability_sweep(&s.image, &seeds, Method::GridFill, &cfg, s.truth.centroid).unwrap();
        assert!(rays.inner_stability > grid.inner_stability);
    }

    #[test]
    fn runtime_is_positive() {
        assert!(median_runtime_ns(1, || 1 + 1) >= 1);
    }
}
