//! Ray-casting feature estimators and the inner-point update they share
//! with the filling estimators.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::image::{EdgeImage, FPoint, Point, PointMean};
use crate::raster::{cast_ray_visit, step_toward, RayHit};

/// Upper bound on `n^y`, checked before any casting.
pub const MAX_CASCADE_RAYS: u64 = 65_536;

/// Parameters shared by all estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    /// Rays cast per origin.
    pub n: usize,
    /// Recast depth of the cascade variants.
    pub y: u32,
    /// Block size (`ny-raster`) or grid spacing (`grid-fill`), in pixels.
    pub m: usize,
    pub max_iter: usize,
    /// Displacements below this many pixels count as negligible.
    pub epsilon: f64,
    /// Orientation of ray 0, in radians.
    pub angle_offset: f64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            n: 32,
            y: 2,
            m: 8,
            max_iter: 10,
            epsilon: 0.5,
            angle_offset: 0.0,
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n < 3 {
            return fail(format!("n must be >= 3, got {}", self.n));
        }
        if self.y < 1 {
            return fail("y must be >= 1".into());
        }
        if self.m < 2 {
            return fail(format!("m must be >= 2, got {}", self.m));
        }
        if self.max_iter < 1 {
            return fail("max_iter must be >= 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return fail(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !self.angle_offset.is_finite() {
            return fail("angle_offset must be finite".into());
        }
        Ok(())
    }

    pub(crate) fn validate_for(&self, image: &EdgeImage) -> Result<()> {
        self.validate()?;
        let side = image.width().min(image.height()) as f64;
        if self.epsilon >= side {
            return Err(Error::Config(format!(
                "epsilon {} is not below the image's smaller side {side}",
                self.epsilon
            )));
        }
        Ok(())
    }

    fn validate_cascade(&self, image: &EdgeImage) -> Result<()> {
        self.validate_for(image)?;
        match (self.n as u64).checked_pow(self.y) {
            Some(total) if total <= MAX_CASCADE_RAYS => Ok(()),
            _ => Err(Error::Config(format!(
                "n^y = {}^{} exceeds the cap of {MAX_CASCADE_RAYS} rays",
                self.n, self.y
            ))),
        }
    }

    /// Angle of ray `k` of `n`.
    pub fn ray_angle(&self, k: usize) -> f64 {
        self.angle_offset + TAU * k as f64 / self.n as f64
    }

    /// Geometric bound `n + n^2 + ... + n^y` on rays cast by one cascade.
    pub fn cascade_ray_bound(&self) -> u64 {
        (1..=self.y).map(|k| (self.n as u64).pow(k)).sum()
    }
}

/// Per-call details beyond the headline features.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    /// Grid-fill area rescaled onto pixel units.
    pub calibrated_area: Option<f64>,
    /// Selected block count after each iteration (`ny-raster` only).
    pub block_counts: Vec<usize>,
    /// A ray backing the estimate stopped at the border, or a fill touched it.
    pub leaked: bool,
    /// Queue insertions made by a fill.
    pub queue_pushes: u64,
}

/// Result of one estimator call.
#[derive(Debug, Clone, PartialEq)]
pub struct Features {
    pub centroid: FPoint,
    /// Method-specific area measure.
    pub area: f64,
    /// Updated inner point.
    pub inner: Point,
    pub iterations: usize,
    pub converged: bool,
    pub rays_cast: u64,
    /// Hits, blocks or pixels backing the estimate.
    pub support: usize,
    pub diagnostics: Diagnostics,
}

fn cast_fan(
    image: &EdgeImage,
    origin: Point,
    cfg: &EstimatorConfig,
    visit: &mut dyn FnMut(Point),
) -> Result<Vec<RayHit>> {
    (0..cfg.n)
        .map(|k| cast_ray_visit(image, origin, cfg.ray_angle(k), &mut *visit))
        .collect()
}

fn hit_mean(hits: &[RayHit]) -> FPoint {
    hits.iter()
        .map(|h| h.hit)
        .collect::<PointMean>()
        .mean()
        .expect("a fan has at least three rays")
}

/// Casts `cfg.n` rays from `p` and moves it toward the mean hit position.
/// Returns the new point and the number of rays cast.
pub(crate) fn recenter(image: &EdgeImage, p: Point, cfg: &EstimatorConfig) -> Result<(Point, u64)> {
    image.check_free(p)?;
    let hits = cast_fan(image, p, cfg, &mut |_| {})?;
    Ok((step_toward(image, p, hit_mean(&hits))?, hits.len() as u64))
}

/// Relocates `p` toward the average hit position of `cfg.n` rays cast from it.
pub fn recenter_inner_point(image: &EdgeImage, p: Point, cfg: &EstimatorConfig) -> Result<Point> {
    cfg.validate_for(image)?;
    recenter(image, p, cfg).map(|(q, _)| q)
}

struct Cascade {
    /// Final-level hits.
    hits: Vec<RayHit>,
    /// Recast origins of the deepest level that was recast from (empty for y = 1).
    origins: Vec<Point>,
    rays: u64,
}

/// Casts `n` rays from `origin`, then `n` more from the last free pixel of
/// every hit, `y` levels deep. Origins are deduplicated per level and a hit
/// whose last free pixel is its own origin is not recast.
fn cascade(image: &EdgeImage, origin: Point, cfg: &EstimatorConfig, visit: &mut dyn FnMut(Point)) -> Result<Cascade> {
    let mut origins = vec![origin];
    let mut recast_from = Vec::new();
    let mut rays = 0u64;
    let mut hits = Vec::new();
    for level in 0..cfg.y {
        hits.clear();
        let mut next = Vec::new();
        for &o in &origins {
            let fan = cast_fan(image, o, cfg, visit)?;
            rays += fan.len() as u64;
            next.extend(fan.iter().map(|h| h.last_free).filter(|&p| p != o));
            hits.extend(fan);
        }
        if level + 1 == cfg.y {
            break;
        }
        next.sort_unstable();
        next.dedup();
        if next.is_empty() {
            break;
        }
        recast_from = next.clone();
        origins = next;
    }
    debug_assert!(rays <= cfg.cascade_ray_bound());
    Ok(Cascade {
        hits,
        origins: recast_from,
        rays,
    })
}

/// State of the inner-point update loop.
struct Outer {
    inner: Point,
    prev_centroid: FPoint,
    iterations: usize,
    converged: bool,
    rays: u64,
}

impl Outer {
    fn new(inner: Point) -> Self {
        Outer {
            inner,
            prev_centroid: inner.to_fpoint(),
            iterations: 0,
            converged: false,
            rays: 0,
        }
    }

    /// Moves the inner point toward `centroid`; returns whether both the
    /// centroid and the inner point moved less than epsilon.
    fn advance(&mut self, image: &EdgeImage, centroid: FPoint, cfg: &EstimatorConfig) -> Result<bool> {
        let next = step_toward(image, self.inner, centroid)?;
        let still = centroid.distance(self.prev_centroid) < cfg.epsilon && next.distance(self.inner) < cfg.epsilon;
        self.prev_centroid = centroid;
        self.inner = next;
        self.iterations += 1;
        Ok(still)
    }

    fn finish(
        mut self,
        image: &EdgeImage,
        cfg: &EstimatorConfig,
        centroid: FPoint,
        area: f64,
        support: usize,
        diagnostics: Diagnostics,
    ) -> Result<Features> {
        let (inner, rays) = recenter(image, self.inner, cfg)?;
        self.rays += rays;
        Ok(Features {
            centroid,
            area,
            inner,
            iterations: self.iterations,
            converged: self.converged,
            rays_cast: self.rays,
            support,
            diagnostics,
        })
    }
}

/// Shared loop of the ray-casting variants without rasterization.
fn iterate_rays(image: &EdgeImage, inner: Point, cfg: &EstimatorConfig, depth: u32) -> Result<Features> {
    image.check_free(inner)?;
    let level_cfg = EstimatorConfig { y: depth, ..*cfg };
    let mut outer = Outer::new(inner);
    let mut last = None;
    while outer.iterations < cfg.max_iter {
        let c = cascade(image, outer.inner, &level_cfg, &mut |_| {})?;
        outer.rays += c.rays;
        let centroid = hit_mean(&c.hits);
        let still = outer.advance(image, centroid, cfg)?;
        last = Some((centroid, c.hits));
        if still {
            outer.converged = true;
            break;
        }
    }
    let (centroid, hits) = last.expect("max_iter >= 1");
    let diagnostics = Diagnostics {
        leaked: hits.iter().any(|h| !h.hit_is_edge),
        ..Diagnostics::default()
    };
    let area = hits.iter().map(|h| h.length).sum();
    outer.finish(image, cfg, centroid, area, hits.len(), diagnostics)
}

/// Single-pass `n`-ray casting: centroid is the mean hit position and area
/// the sum of ray lengths.
pub fn estimate_n_ray(image: &EdgeImage, inner: Point, cfg: &EstimatorConfig) -> Result<Features> {
    cfg.validate_for(image)?;
    iterate_rays(image, inner, &EstimatorConfig { max_iter: 1, ..*cfg }, 1)
}

/// `n`-ray casting repeated until the centroid and the inner point stop
/// moving, or `max_iter` passes.
pub fn estimate_iterative_n_ray(image: &EdgeImage, inner: Point, cfg: &EstimatorConfig) -> Result<Features> {
    cfg.validate_for(image)?;
    iterate_rays(image, inner, cfg, 1)
}

/// Iterative casting where every pass recasts `n` rays from each hit for
/// `y` levels and averages the final level's hits.
pub fn estimate_ny_ray(image: &EdgeImage, inner: Point, cfg: &EstimatorConfig) -> Result<Features> {
    cfg.validate_cascade(image)?;
    iterate_rays(image, inner, cfg, cfg.y)
}

/// Recast origins of one cascade pass from `inner`, for inspecting where the
/// final level's rays start.
pub fn cascade_origins(image: &EdgeImage, inner: Point, cfg: &EstimatorConfig) -> Result<Vec<Point>> {
    cfg.validate_cascade(image)?;
    image.check_free(inner)?;
    Ok(cascade(image, inner, cfg, &mut |_| {})?.origins)
}

/// Persistent set of `m`x`m` blocks anchored at the image origin.
struct BlockSet {
    m: i64,
    cols: usize,
    selected: Vec<bool>,
    centers: PointMean,
    count: usize,
}

impl BlockSet {
    fn new(image: &EdgeImage, m: usize) -> Self {
        let cols = image.width().div_ceil(m);
        let rows = image.height().div_ceil(m);
        BlockSet {
            m: m as i64,
            cols,
            selected: vec![false; cols * rows],
            centers: PointMean::default(),
            count: 0,
        }
    }

    fn mark(&mut self, p: Point) {
        let (bx, by) = (p.x / self.m, p.y / self.m);
        let i = by as usize * self.cols + bx as usize;
        if !self.selected[i] {
            self.selected[i] = true;
            self.count += 1;
            self.centers
                .push_doubled(Point::new(2 * bx * self.m + self.m - 1, 2 * by * self.m + self.m - 1));
        }
    }
}

/// Cascade casting with `m`-rasterization: every block a ray runs through
/// joins a selected set that only grows. Centroid is the mean block center
/// and area the selected count times `m^2`.
pub fn estimate_ny_raster(image: &EdgeImage, inner: Point, cfg: &EstimatorConfig) -> Result<Features> {
    estimate_ny_raster_with_block_size(image, inner, cfg, cfg.m)
}

/// [`estimate_ny_raster`] with an explicit block size, which may be 1.
pub fn estimate_ny_raster_with_block_size(
    image: &EdgeImage,
    inner: Point,
    cfg: &EstimatorConfig,
    block: usize,
) -> Result<Features> {
    cfg.validate_cascade(image)?;
    if block < 1 {
        return Err(Error::Config("block size must be >= 1".into()));
    }
    image.check_free(inner)?;
    let mut blocks = BlockSet::new(image, block);
    let mut outer = Outer::new(inner);
    let mut counts = Vec::new();
    let mut leaked = false;
    let mut centroid = inner.to_fpoint();
    while outer.iterations < cfg.max_iter {
        let before = blocks.count;
        let c = cascade(image, outer.inner, cfg, &mut |p| blocks.mark(p))?;
        outer.rays += c.rays;
        leaked |= c.hits.iter().any(|h| !h.hit_is_edge);
        counts.push(blocks.count);
        centroid = blocks.centers.mean().expect("origin block is always selected");
        let still = outer.advance(image, centroid, cfg)?;
        if still || blocks.count == before {
            outer.converged = true;
            break;
        }
    }
    let area = (blocks.count * block * block) as f64;
    let diagnostics = Diagnostics {
        block_counts: counts,
        leaked,
        ..Diagnostics::default()
    };
    outer.finish(image, cfg, centroid, area, blocks.count, diagnostics)
}
