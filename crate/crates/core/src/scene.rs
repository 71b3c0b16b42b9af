//! Synthetic edge scenes and seeded edge-miscalculation injection.
//!
//! Every shape is rasterized the same way: an analytic filled region is
//! computed, its 4-boundary becomes the contour, and contour pixels that do
//! not touch both the interior and the exterior are folded into the side
//! they belong to. What remains is a closed 8-connected curve in which every
//! pixel separates inside from outside, so deleting any single contour pixel
//! opens a 4-connected gap.

use std::f64::consts::FRAC_PI_2;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::image::{EdgeImage, FPoint, Point};
use crate::oracle::{compute_ground_truth, GroundTruth};

/// Angular spacing between adjacent fingers of a hand scene.
pub const FINGER_SPACING: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HandSpec {
    pub palm_radius: i64,
    pub fingers: u32,
    pub finger_length: f64,
    pub finger_width: f64,
    /// Zero points the fingers up (toward row 0).
    pub rotation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Circle {
        radius: i64,
    },
    Square {
        half_side: i64,
    },
    Ellipse {
        semi_major: f64,
        semi_minor: f64,
        rotation: f64,
    },
    Hand(HandSpec),
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Circle { .. } => "circle",
            Shape::Square { .. } => "square",
            Shape::Ellipse { .. } => "ellipse",
            Shape::Hand(_) => "hand",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneSpec {
    pub width: usize,
    pub height: usize,
    pub center: Point,
    pub shape: Shape,
}

impl SceneSpec {
    pub fn circle(width: usize, height: usize, center: Point, radius: i64) -> Self {
        SceneSpec {
            width,
            height,
            center,
            shape: Shape::Circle { radius },
        }
    }

    pub fn square(width: usize, height: usize, center: Point, half_side: i64) -> Self {
        SceneSpec {
            width,
            height,
            center,
            shape: Shape::Square { half_side },
        }
    }

    pub fn ellipse(
        width: usize,
        height: usize,
        center: Point,
        semi_major: f64,
        semi_minor: f64,
        rotation: f64,
    ) -> Self {
        SceneSpec {
            width,
            height,
            center,
            shape: Shape::Ellipse {
                semi_major,
                semi_minor,
                rotation,
            },
        }
    }

    pub fn hand(width: usize, height: usize, center: Point, hand: HandSpec) -> Self {
        SceneSpec {
            width,
            height,
            center,
            shape: Shape::Hand(hand),
        }
    }

    pub fn translated(&self, dx: i64, dy: i64) -> Self {
        SceneSpec {
            center: Point::new(self.center.x + dx, self.center.y + dy),
            ..*self
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Scene(msg.to_string()));
        match self.shape {
            Shape::Circle { radius } if radius < 2 => bad("circle radius must be >= 2"),
            Shape::Square { half_side } if half_side < 2 => bad("square half-side must be >= 2"),
            Shape::Ellipse {
                semi_major,
                semi_minor,
                rotation,
            } if !(semi_major >= 2.0 && semi_minor >= 2.0 && rotation.is_finite()) => {
                bad("ellipse semi-axes must be >= 2 and rotation finite")
            }
            Shape::Hand(h)
                if h.palm_radius < 3
                    || (h.fingers > 0 && !(h.finger_width >= 3.0 && h.finger_length >= 0.0))
                    || !h.rotation.is_finite() =>
            {
                bad("hand needs palm radius >= 3, finger width >= 3 and non-negative finger length")
            }
            _ => Ok(()),
        }
    }

    fn finger_axes(hand: &HandSpec, center: Point) -> Vec<(FPoint, FPoint)> {
        let c = center.to_fpoint();
        let k = hand.fingers as f64;
        (0..hand.fingers)
            .map(|j| {
                let phi = hand.rotation - FRAC_PI_2 + FINGER_SPACING * (j as f64 - (k - 1.0) / 2.0);
                let reach = hand.palm_radius as f64 + hand.finger_length;
                (c, FPoint::new(c.x + reach * phi.cos(), c.y + reach * phi.sin()))
            })
            .collect()
    }

    /// The analytic filled region, before contour extraction.
    fn filled(&self) -> Vec<bool> {
        let (w, h) = (self.width, self.height);
        let c = self.center;
        let mut out = vec![false; w * h];
        let mut set = |x: i64, y: i64| {
            if x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h {
                out[y as usize * w + x as usize] = true;
            }
        };
        match self.shape {
            Shape::Circle { radius } => {
                for (dy, lo, hi) in midpoint_disk_spans(radius) {
                    for dx in lo..=hi {
                        set(c.x + dx, c.y + dy);
                    }
                }
            }
            Shape::Square { half_side } => {
                for dy in -half_side..=half_side {
                    for dx in -half_side..=half_side {
                        set(c.x + dx, c.y + dy);
                    }
                }
            }
            Shape::Ellipse {
                semi_major,
                semi_minor,
                rotation,
            } => {
                let (sin, cos) = rotation.sin_cos();
                let r = semi_major.ceil() as i64 + 1;
                for dy in -r..=r {
                    for dx in -r..=r {
                        let u = dx as f64 * cos + dy as f64 * sin;
                        let v = -(dx as f64) * sin + dy as f64 * cos;
                        if (u / semi_major).powi(2) + (v / semi_minor).powi(2) <= 1.0 {
                            set(c.x + dx, c.y + dy);
                        }
                    }
                }
            }
            Shape::Hand(hand) => {
                for (dy, lo, hi) in midpoint_disk_spans(hand.palm_radius) {
                    for dx in lo..=hi {
                        set(c.x + dx, c.y + dy);
                    }
                }
                let half = hand.finger_width / 2.0;
                for (a, b) in Self::finger_axes(&hand, c) {
                    let x0 = (a.x.min(b.x) - half).floor() as i64;
                    let x1 = (a.x.max(b.x) + half).ceil() as i64;
                    let y0 = (a.y.min(b.y) - half).floor() as i64;
                    let y1 = (a.y.max(b.y) + half).ceil() as i64;
                    for y in y0..=y1 {
                        for x in x0..=x1 {
                            if segment_distance(FPoint::new(x as f64, y as f64), a, b) <= half {
                                set(x, y);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Palm = 0, finger `j` = `j + 1`; other shapes are a single region.
    pub fn region_label(&self, p: Point) -> u32 {
        let Shape::Hand(hand) = self.shape else {
            return 0;
        };
        let c = self.center.to_fpoint();
        let q = p.to_fpoint();
        if q.distance(c) <= hand.palm_radius as f64 {
            return 0;
        }
        Self::finger_axes(&hand, self.center)
            .iter()
            .enumerate()
            .map(|(j, &(a, b))| (j as u32 + 1, segment_distance(q, a, b)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .map_or(0, |(label, _)| label)
    }

    /// Target point for the fingertip inner point, if this is a hand with fingers.
    fn fingertip_anchor(&self) -> Option<FPoint> {
        match self.shape {
            Shape::Hand(hand) if hand.fingers > 0 => Self::finger_axes(&hand, self.center).first().map(|&(_, tip)| tip),
            _ => None,
        }
    }
}

/// Row spans `(dy, dx_min, dx_max)` of the disk bounded by the midpoint
/// circle of the given radius.
pub fn midpoint_disk_spans(radius: i64) -> Vec<(i64, i64, i64)> {
    let mut extent = vec![i64::MIN; 2 * radius as usize + 1];
    let mut plot = |dx: i64, dy: i64| {
        let e = &mut extent[(dy + radius) as usize];
        *e = (*e).max(dx.abs());
    };
    let (mut x, mut y, mut d) = (0i64, radius, 1 - radius);
    while x <= y {
        for (a, b) in [(x, y), (y, x)] {
            plot(a, b);
            plot(a, -b);
            plot(-a, b);
            plot(-a, -b);
        }
        x += 1;
        if d < 0 {
            d += 2 * x + 1;
        } else {
            y -= 1;
            d += 2 * (x - y) + 1;
        }
    }
    extent
        .into_iter()
        .enumerate()
        .map(|(i, e)| (i as i64 - radius, -e, e))
        .collect()
}

fn segment_distance(p: FPoint, a: FPoint, b: FPoint) -> f64 {
    let (vx, vy) = (b.x - a.x, b.y - a.y);
    let len2 = vx * vx + vy * vy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * vx + (p.y - a.y) * vy) / len2).clamp(0.0, 1.0)
    };
    p.distance(FPoint::new(a.x + t * vx, a.y + t * vy))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    Exterior,
    Contour,
    Interior,
}

/// Splits a filled region into exterior, thin contour and interior.
fn classify(width: usize, height: usize, filled: &[bool]) -> Vec<Class> {
    let (w, h) = (width as i64, height as i64);
    let at = |x: i64, y: i64| (y * w + x) as usize;
    let neighbors = |i: usize| {
        let (x, y) = ((i % width) as i64, (i / width) as i64);
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .into_iter()
            .map(move |(dx, dy)| (x + dx, y + dy))
            .filter(move |&(nx, ny)| nx >= 0 && ny >= 0 && nx < w && ny < h)
            .map(move |(nx, ny)| at(nx, ny))
    };

    let mut class: Vec<Class> = (0..filled.len())
        .map(|i| {
            if !filled[i] {
                Class::Exterior
            } else if neighbors(i).count() < 4 || neighbors(i).any(|j| !filled[j]) {
                Class::Contour
            } else {
                Class::Interior
            }
        })
        .collect();

    loop {
        let mut changed = false;
        for (lacking, becomes) in [(Class::Interior, Class::Exterior), (Class::Exterior, Class::Interior)] {
            let flip: Vec<usize> = (0..class.len())
                .filter(|&i| class[i] == Class::Contour && !neighbors(i).any(|j| class[j] == lacking))
                .collect();
            changed |= !flip.is_empty();
            for i in flip {
                class[i] = becomes;
            }
        }
        if !changed {
            break;
        }
    }
    class
}

/// A generated scene with its ground truth.
#[derive(Debug, Clone)]
pub struct Scene {
    pub spec: SceneSpec,
    pub image: EdgeImage,
    /// Interior pixel nearest the shape's analytic center (the palm for hands).
    pub inner: Point,
    /// Interior pixel nearest the first finger's tip center, for hands with fingers.
    pub fingertip: Option<Point>,
    pub truth: GroundTruth,
}

impl Scene {
    /// Deterministic interior seed points: the ground inner point, the
    /// fingertip when present, then interior pixels at the 1/4, 1/2 and 3/4
    /// positions of the row-major interior list.
    pub fn seed_points(&self) -> Vec<Point> {
        let mut seeds = vec![self.inner];
        seeds.extend(self.fingertip);
        let n = self.truth.interior.len();
        for frac in [1, 2, 3] {
            let p = self.truth.interior[n * frac / 4];
            if !seeds.contains(&p) {
                seeds.push(p);
            }
        }
        seeds
    }
}

fn nearest_interior(truth: &GroundTruth, target: FPoint) -> Option<Point> {
    truth.interior.iter().copied().min_by(|a, b| {
        a.to_fpoint()
            .distance(target)
            .total_cmp(&b.to_fpoint().distance(target))
    })
}

pub fn generate(spec: &SceneSpec) -> Result<Scene> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);
    if w < crate::image::MIN_SIDE || h < crate::image::MIN_SIDE {
        return Err(Error::Scene(format!("frame {w}x{h} is too small")));
    }
    let filled = spec.filled();
    let touches_border = filled.iter().enumerate().any(|(i, &f)| {
        let (x, y) = (i % w, i / w);
        f && (x == 0 || y == 0 || x == w - 1 || y == h - 1)
    });
    let clipped = spec_pixel_count(spec) != filled.iter().filter(|&&f| f).count();
    if touches_border || clipped {
        return Err(Error::Scene(format!(
            "{} does not fit in {w}x{h} with a one pixel margin",
            spec.shape.name()
        )));
    }
    let class = classify(w, h, &filled);
    let image = EdgeImage::new(w, h, class.iter().map(|&c| c == Class::Contour).collect())?;
    let interior_count = class.iter().filter(|&&c| c == Class::Interior).count();
    let probe = (0..class.len())
        .filter(|&i| class[i] == Class::Interior)
        .map(|i| image.point_at(i))
        .min_by_key(|p| (p.x - spec.center.x).pow(2) + (p.y - spec.center.y).pow(2))
        .ok_or_else(|| Error::Scene(format!("{} has no interior", spec.shape.name())))?;
    let mut truth = compute_ground_truth(&image, probe)?;
    if truth.area != interior_count {
        return Err(Error::Scene(format!(
            "{} interior is not 4-connected",
            spec.shape.name()
        )));
    }
    truth.set_labels(|p| spec.region_label(p));
    let inner = nearest_interior(&truth, spec.center.to_fpoint())
        .ok_or_else(|| Error::Scene("shape has no interior".into()))?;
    let fingertip = spec.fingertip_anchor().and_then(|tip| nearest_interior(&truth, tip));
    Ok(Scene {
        spec: *spec,
        image,
        inner,
        fingertip,
        truth,
    })
}

/// Filled pixel count with no clipping, used to detect shapes that spill
/// out of the frame.
fn spec_pixel_count(spec: &SceneSpec) -> usize {
    let pad = 4 * match spec.shape {
        Shape::Circle { radius } => radius,
        Shape::Square { half_side } => half_side,
        Shape::Ellipse { semi_major, .. } => semi_major.ceil() as i64,
        Shape::Hand(hand) => hand.palm_radius + (hand.finger_length + hand.finger_width).ceil() as i64,
    } as usize
        + 4;
    let big = SceneSpec {
        width: pad,
        height: pad,
        center: Point::new(pad as i64 / 2, pad as i64 / 2),
        ..*spec
    };
    big.filled().iter().filter(|&&f| f).count()
}

/// Seeded deletion of edge pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NoiseSpec {
    pub drop_count: usize,
    pub seed: u64,
}

/// Deletes `drop_count` distinct edge pixels chosen uniformly without
/// replacement by ChaCha8 seeded with `seed`.
pub fn inject_noise(image: &EdgeImage, noise: NoiseSpec) -> Result<EdgeImage> {
    let edges: Vec<Point> = image.edge_points().collect();
    if noise.drop_count > edges.len() {
        return Err(Error::Argument(format!(
            "cannot drop {} edge pixels from an image with {}",
            noise.drop_count,
            edges.len()
        )));
    }
    if noise.drop_count == 0 {
        return Ok(image.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let picked = index::sample(&mut rng, edges.len(), noise.drop_count);
    image.with_pixels(picked.into_iter().map(|i| edges[i]), false)
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-item seed derived from a master seed: `mix64(master + (k + 1) * 0x9E3779B97F4A7C15)`.
pub fn derive_seed(master: u64, k: u64) -> u64 {
    mix64(master.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle30() -> Scene {
        generate(&SceneSpec::circle(101, 101, Point::new(50, 50), 30)).unwrap()
    }

    #[test]
    fn circle_interior_near_analytic_area() {
        let s = circle30();
        // The contour occupies radius 30 itself, so the interior disk has
        // radius ~29.5.
        let analytic = std::f64::consts::PI * 29.5 * 29.5;
        assert!(
            (s.truth.area as f64 - analytic).abs() < 0.02 * analytic,
            "{}",
            s.truth.area
        );
        assert!((2700..=2900).contains(&s.truth.area));
        assert_eq!(s.inner, Point::new(50, 50));
        assert!(s.image.is_edge(Point::new(80, 50)));
        assert!(!s.image.is_edge(Point::new(79, 50)));
    }

    #[test]
    fn square_interior_is_39_by_39() {
        let s = generate(&SceneSpec::square(101, 101, Point::new(50, 50), 20)).unwrap();
        assert_eq!(s.truth.area, 1521);
        // corners fold outward
        assert!(!s.image.is_edge(Point::new(30, 30)));
        assert!(s.image.is_edge(Point::new(31, 30)));
    }

    #[test]
    fn fingerless_hand_is_a_circle() {
        let circle = circle30();
        let hand = generate(&SceneSpec::hand(
            101,
            101,
            Point::new(50, 50),
            HandSpec {
                palm_radius: 30,
                fingers: 0,
                finger_length: 20.0,
                finger_width: 8.0,
                rotation: 0.3,
            },
        ))
        .unwrap();
        assert_eq!(hand.image, circle.image);
        assert_eq!(hand.fingertip, None);
    }

    #[test]
    fn every_contour_pixel_separates() {
        let s = circle30();
        for p in s.image.edge_points() {
            let ns: Vec<_> = s.image.neighbors4(p).collect();
            assert!(ns.iter().any(|&q| s.truth.contains(q)), "{p:?}");
            assert!(ns.iter().any(|&q| !s.truth.contains(q) && !s.image.is_edge(q)), "{p:?}");
        }
    }

    #[test]
    fn out_of_frame_shapes_fail() {
        assert!(generate(&SceneSpec::circle(50, 50, Point::new(25, 25), 25)).is_err());
        assert!(generate(&SceneSpec::circle(101, 101, Point::new(10, 50), 30)).is_err());
        assert!(generate(&SceneSpec::circle(101, 101, Point::new(50, 50), 1)).is_err());
    }

    #[test]
    fn noise_drops_exact_count() {
        let s = circle30();
        let total = s.image.edge_count();
        assert_eq!(
            inject_noise(&s.image, NoiseSpec { drop_count: 0, seed: 7 }).unwrap(),
            s.image
        );
        let one = inject_noise(
            &s.image,
            NoiseSpec {
                drop_count: 1,
                seed: 42,
            },
        )
        .unwrap();
        assert_eq!(one.edge_count(), total - 1);
        let dropped: Vec<_> = s.image.edge_points().filter(|&p| !one.is_edge(p)).collect();
        assert_eq!(dropped.len(), 1);
        assert!(one.edge_points().all(|p| s.image.is_edge(p)));
        let all = inject_noise(
            &s.image,
            NoiseSpec {
                drop_count: total,
                seed: 1,
            },
        )
        .unwrap();
        assert_eq!(all.edge_count(), 0);
        assert!(inject_noise(
            &s.image,
            NoiseSpec {
                drop_count: total + 1,
                seed: 1
            }
        )
        .is_err());
        assert_eq!(
            one,
            inject_noise(
                &s.image,
                NoiseSpec {
                    drop_count: 1,
                    seed: 42
                }
            )
            .unwrap()
        );
    }

    #[test]
    fn derived_seeds_differ() {
        let a: Vec<_> = (0..8).map(|k| derive_seed(5, k)).collect();
        let mut b = a.clone();
        b.sort();
        b.dedup();
        assert_eq!(a.len(), b.len());
        assert_ne!(derive_seed(5, 0), derive_seed(6, 0));
    }
}
