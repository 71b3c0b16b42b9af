//! Filling-based estimators: exhaustive pixel filling and `m`-grid filling.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::image::{EdgeImage, Point, PointMean};
use crate::raster::step_toward;
use crate::raycast::{recenter, Diagnostics, EstimatorConfig, Features};

/// Pixels marked by a fill.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillResult {
    /// Marked pixels in row-major order.
    pub marked: Vec<Point>,
    /// Some marked pixel lies on the image border.
    pub touched_border: bool,
    pub queue_pushes: u64,
}

/// Marked pixels of a fill, tracked as a mask plus bounding box so they can
/// be listed in row-major order without sorting.
struct Marks {
    mask: Vec<bool>,
    width: usize,
    lo: Point,
    hi: Point,
}

impl Marks {
    fn new(image: &EdgeImage, seed: Point) -> Self {
        Marks {
            mask: vec![false; image.width() * image.height()],
            width: image.width(),
            lo: seed,
            hi: seed,
        }
    }

    fn mark(&mut self, p: Point) {
        self.mask[p.y as usize * self.width + p.x as usize] = true;
        self.lo = Point::new(self.lo.x.min(p.x), self.lo.y.min(p.y));
        self.hi = Point::new(self.hi.x.max(p.x), self.hi.y.max(p.y));
    }

    fn into_points(self) -> Vec<Point> {
        let mut out = Vec::new();
        for y in self.lo.y..=self.hi.y {
            let row = y as usize * self.width;
            for x in self.lo.x..=self.hi.x {
                if self.mask[row + x as usize] {
                    out.push(Point::new(x, y));
                }
            }
        }
        out
    }
}

fn finish(image: &EdgeImage, marks: Marks, queue_pushes: u64) -> FillResult {
    let marked = marks.into_points();
    FillResult {
        touched_border: marked.iter().any(|&p| image.on_border(p)),
        marked,
        queue_pushes,
    }
}

/// Breadth-first 4-connected fill from `inner`.
///
/// Neighbors are queued without looking at them; edge pixels are dropped
/// when dequeued.
pub fn pixel_fill(image: &EdgeImage, inner: Point) -> Result<FillResult> {
    image.check_free(inner)?;
    let mut queued = vec![false; image.width() * image.height()];
    let mut marked = Marks::new(image, inner);
    let mut queue = VecDeque::from([inner]);
    queued[image.index(inner)] = true;
    let mut pushes = 1u64;
    while let Some(p) = queue.pop_front() {
        if image.is_edge(p) {
            continue;
        }
        marked.mark(p);
        for q in image.neighbors4(p) {
            let i = image.index(q);
            if !queued[i] {
                queued[i] = true;
                queue.push_back(q);
                pushes += 1;
            }
        }
    }
    Ok(finish(image, marked, pushes))
}

/// True when `p` lies on a grid line of spacing `m` through `anchor`.
pub fn on_grid(p: Point, anchor: Point, m: usize) -> bool {
    let m = m as i64;
    (p.x - anchor.x).rem_euclid(m) == 0 || (p.y - anchor.y).rem_euclid(m) == 0
}

/// Breadth-first fill along the lines of an `m`-spaced grid anchored at
/// `inner`; a neighbor is queued only if it is a free, unmarked grid pixel.
pub fn grid_fill(image: &EdgeImage, inner: Point, m: usize) -> Result<FillResult> {
    image.check_free(inner)?;
    if m < 2 {
        return Err(Error::Config(format!("grid size must be >= 2, got {m}")));
    }
    let (w, h) = (image.width() as i64, image.height() as i64);
    let line_col: Vec<bool> = (0..w).map(|x| on_grid(Point::new(x, inner.y + 1), inner, m)).collect();
    let line_row: Vec<bool> = (0..h).map(|y| on_grid(Point::new(inner.x + 1, y), inner, m)).collect();
    let edges = image.edges();
    let mut seen = vec![false; edges.len()];
    let mut marked = Marks::new(image, inner);
    let mut queue = VecDeque::from([inner]);
    seen[image.index(inner)] = true;
    let mut pushes = 1u64;
    while let Some(p) = queue.pop_front() {
        marked.mark(p);
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let q = Point::new(p.x + dx, p.y + dy);
            if q.x < 0 || q.y < 0 || q.x >= w || q.y >= h {
                continue;
            }
            let i = (q.y * w + q.x) as usize;
            if !seen[i] && !edges[i] && (line_col[q.x as usize] || line_row[q.y as usize]) {
                seen[i] = true;
                queue.push_back(q);
                pushes += 1;
            }
        }
    }
    Ok(finish(image, marked, pushes))
}

/// Raw grid-pixel count rescaled to pixel area: each `m`-band of an interior
/// of area `A` holds about `A (2m - 1) / m^2` grid pixels.
pub fn calibrated_grid_area(count: usize, m: usize) -> f64 {
    let m = m as f64;
    count as f64 * m * m / (2.0 * m - 1.0)
}

fn features_from_fill(
    image: &EdgeImage,
    inner: Point,
    cfg: &EstimatorConfig,
    fill: &FillResult,
    calibrated_area: Option<f64>,
) -> Result<Features> {
    let centroid = fill
        .marked
        .iter()
        .copied()
        .collect::<PointMean>()
        .mean()
        .unwrap_or_else(|| inner.to_fpoint());
    let moved = step_toward(image, inner, centroid)?;
    let (new_inner, rays) = recenter(image, moved, cfg)?;
    Ok(Features {
        centroid,
        area: fill.marked.len() as f64,
        inner: new_inner,
        iterations: 1,
        converged: true,
        rays_cast: rays,
        support: fill.marked.len(),
        diagnostics: Diagnostics {
            calibrated_area,
            leaked: fill.touched_border,
            queue_pushes: fill.queue_pushes,
            ..Diagnostics::default()
        },
    })
}

/// Centroid and count of every pixel reachable from `inner`.
pub fn estimate_pixel_fill(image: &EdgeImage, inner: Point, cfg: &EstimatorConfig) -> Result<Features> {
    cfg.validate_for(image)?;
    let fill = pixel_fill(image, inner)?;
    features_from_fill(image, inner, cfg, &fill, None)
}

/// Centroid and count of the grid pixels reachable from `inner` with grid
/// spacing `cfg.m`; the calibrated area goes in the diagnostics.
pub fn estimate_grid_fill(image: &EdgeImage, inner: Point, cfg: &EstimatorConfig) -> Result<Features> {
    cfg.validate_for(image)?;
    let fill = grid_fill(image, inner, cfg.m)?;
    let calibrated = calibrated_grid_area(fill.marked.len(), cfg.m);
    features_from_fill(image, inner, cfg, &fill, Some(calibrated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::FPoint;
    use crate::oracle::compute_ground_truth;
    use crate::scene::{generate, inject_noise, NoiseSpec, SceneSpec};

    fn cavity() -> EdgeImage {
        EdgeImage::from_fn(7, 7, |p| {
            (2..=4).contains(&p.x) && (2..=4).contains(&p.y) && p != Point::new(3, 3)
        })
        .unwrap()
    }

    fn circle() -> crate::scene::Scene {
        generate(&SceneSpec::circle(101, 101, Point::new(50, 50), 30)).unwrap()
    }

    #[test]
    fn cavity_marks_only_the_seed() {
        let f = pixel_fill(&cavity(), Point::new(3, 3)).unwrap();
        assert_eq!(f.marked, vec![Point::new(3, 3)]);
        assert!(!f.touched_border);
        let e = estimate_pixel_fill(
            &cavity(),
            Point::new(3, 3),
            &EstimatorConfig {
                n: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(e.centroid, FPoint::new(3.0, 3.0));
        assert_eq!(e.area, 1.0);
        let g = estimate_grid_fill(
            &cavity(),
            Point::new(3, 3),
            &EstimatorConfig {
                n: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(g.area, 1.0);
    }

    #[test]
    fn edge_seed_is_rejected() {
        assert!(matches!(
            pixel_fill(&cavity(), Point::new(2, 2)),
            Err(Error::EdgePixel(_))
        ));
        assert!(matches!(
            grid_fill(&cavity(), Point::new(2, 2), 4),
            Err(Error::EdgePixel(_))
        ));
        assert!(grid_fill(&cavity(), Point::new(3, 3), 1).is_err());
    }

    #[test]
    fn pixel_fill_matches_oracle_on_circle() {
        let s = circle();
        let f = pixel_fill(&s.image, s.inner).unwrap();
        assert_eq!(f.marked, s.truth.interior);
        assert!(!f.touched_border);
    }

    #[test]
    fn single_gap_leaks_pixel_fill() {
        let s = circle();
        let noisy = inject_noise(&s.image, NoiseSpec { drop_count: 1, seed: 3 }).unwrap();
        let f = pixel_fill(&noisy, s.inner).unwrap();
        assert!(f.touched_border);
        assert!(f.marked.len() > 2 * s.truth.area);
    }

    #[test]
    fn degenerate_grid_is_two_lines() {
        let img = EdgeImage::from_fn(40, 30, |p| p == Point::new(30, 10) || p == Point::new(10, 25)).unwrap();
        let f = grid_fill(&img, Point::new(10, 10), 100).unwrap();
        let expected: usize = 30 + 25 - 1;
        assert_eq!(f.marked.len(), expected);
        assert!(f.marked.iter().all(|p| p.x == 10 || p.y == 10));
    }

    /// Independent count: interior pixels on the grid, connected along
    /// grid lines, found by iterating reachability to a fixed point.
    fn brute_grid_count(interior: &[Point], anchor: Point, m: usize) -> usize {
        use std::collections::HashSet;
        let cand: HashSet<Point> = interior.iter().copied().filter(|&p| on_grid(p, anchor, m)).collect();
        let mut reached: HashSet<Point> = HashSet::from([anchor]);
        loop {
            let grown: HashSet<Point> = cand
                .iter()
                .copied()
                .filter(|p| {
                    reached.contains(p)
                        || [(1, 0), (-1, 0), (0, 1), (0, -1)]
                            .iter()
                            .any(|(dx, dy)| reached.contains(&Point::new(p.x + dx, p.y + dy)))
                })
                .collect();
            if grown.len() == reached.len() {
                return reached.len();
            }
            reached = grown;
        }
    }

    #[test]
    fn grid_fill_on_square_matches_brute_force() {
        let s = generate(&SceneSpec::square(101, 101, Point::new(50, 50), 20)).unwrap();
        let f = grid_fill(&s.image, Point::new(50, 50), 8).unwrap();
        assert_eq!(
            f.marked.len(),
            brute_grid_count(&s.truth.interior, Point::new(50, 50), 8)
        );
        assert_eq!(f.marked.len(), 5 * 39 * 2 - 25);
        let c = estimate_grid_fill(&s.image, Point::new(50, 50), &EstimatorConfig::default()).unwrap();
        let cal = c.diagnostics.calibrated_area.unwrap();
        assert!((cal - 1521.0).abs() < 0.15 * 1521.0, "{cal}");
        assert_eq!(cal, 365.0 * 64.0 / 15.0);
    }

    #[test]
    fn off_grid_gap_is_invisible() {
        let s = circle();
        let clean = grid_fill(&s.image, s.inner, 8).unwrap();
        let gap = s.image.edge_points().find(|&p| !on_grid(p, s.inner, 8)).unwrap();
        let noisy = s.image.with_pixels([gap], false).unwrap();
        assert_eq!(grid_fill(&noisy, s.inner, 8).unwrap(), clean);
    }

    #[test]
    fn grid_centroid_close_to_truth() {
        let s = circle();
        let cfg = EstimatorConfig::default();
        let g = estimate_grid_fill(&s.image, s.inner, &cfg).unwrap();
        assert!(g.centroid.distance(s.truth.centroid) < 2.0);
        let dense = estimate_grid_fill(&s.image, s.inner, &EstimatorConfig { m: 2, ..cfg }).unwrap();
        let full = estimate_pixel_fill(&s.image, s.inner, &cfg).unwrap();
        assert!(dense.centroid.distance(full.centroid) < 1.0);
    }

    #[test]
    fn grid_marks_fewer_pixels_as_m_grows() {
        let s = circle();
        let counts: Vec<_> = [2, 4, 8, 16]
            .iter()
            .map(|&m| grid_fill(&s.image, s.inner, m).unwrap().marked.len())
            .collect();
        assert!(counts.windows(2).all(|w| w[0] >= w[1]), "{counts:?}");
    }

    #[test]
    fn queue_push_budget() {
        let s = circle();
        for m in [2, 3, 8, 16] {
            let f = grid_fill(&s.image, s.inner, m).unwrap();
            let perimeter = 2 * (s.image.width() + s.image.height()) as u64;
            assert!(f.queue_pushes <= 5 * f.marked.len() as u64 + 4 * perimeter);
        }
        let gt = compute_ground_truth(&s.image, s.inner).unwrap();
        assert_eq!(gt.area, pixel_fill(&s.image, s.inner).unwrap().marked.len());
    }
}
