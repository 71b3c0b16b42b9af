//! Ray traversal and line stepping on the edge raster.
//!
//! Every module that needs to know which pixels a ray "runs through" goes
//! through [`LineWalk`], so casting, inner-point displacement and block
//! rasterization all agree on the same discretization.

use crate::error::Result;
use crate::image::{EdgeImage, FPoint, Point};

/// Integer line stepping from `start` to `end`, one pixel per step along
/// the major axis with 8-connected moves.
///
/// The minor coordinate at step `i` is `i * d_minor / d_major` rounded half
/// away from zero, so walking `a -> b` and `a -> a - (b - a)` visit mirrored
/// pixels.
#[derive(Debug, Clone)]
pub struct LineWalk {
    start: Point,
    dx: i64,
    dy: i64,
    major: i64,
    step: i64,
}

impl LineWalk {
    pub fn new(start: Point, end: Point) -> Self {
        let dx = end.x - start.x;
        let dy = end.y - start.y;
        LineWalk {
            start,
            dx,
            dy,
            major: dx.abs().max(dy.abs()),
            step: 0,
        }
    }

    /// Whether the walk advances one column per step.
    pub fn x_major(&self) -> bool {
        self.dx.abs() >= self.dy.abs()
    }

    fn at(&self, i: i64) -> Point {
        if self.major == 0 {
            return self.start;
        }
        if self.x_major() {
            Point::new(
                self.start.x + i * self.dx.signum(),
                self.start.y + div_round(i * self.dy, self.major),
            )
        } else {
            Point::new(
                self.start.x + div_round(i * self.dx, self.major),
                self.start.y + i * self.dy.signum(),
            )
        }
    }
}

impl Iterator for LineWalk {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if self.step > self.major {
            return None;
        }
        let p = self.at(self.step);
        self.step += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.major + 1 - self.step).max(0) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for LineWalk {}

/// `num / den` rounded half away from zero; `den > 0`.
fn div_round(num: i64, den: i64) -> i64 {
    if num >= 0 {
        (2 * num + den) / (2 * den)
    } else {
        -((-2 * num + den) / (2 * den))
    }
}

/// For a diagonal move `from -> to`, the edge pixel that seals the corner
/// when both side pixels are edges. The side reached along the major axis
/// is reported, so mirrored walks block on mirrored pixels.
fn corner_block(image: &EdgeImage, from: Point, to: Point, x_major: bool) -> Option<Point> {
    if from.x == to.x || from.y == to.y {
        return None;
    }
    let along_x = Point::new(to.x, from.y);
    let along_y = Point::new(from.x, to.y);
    (image.is_edge(along_x) && image.is_edge(along_y)).then_some(if x_major { along_x } else { along_y })
}

/// Terminal record of one cast ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayHit {
    /// First edge pixel met, or the last in-bounds pixel when the ray left
    /// the image.
    pub hit: Point,
    /// Last non-edge pixel traversed (the origin if the first step hits).
    pub last_free: Point,
    /// Euclidean distance from the origin to `last_free`.
    pub length: f64,
    /// False when the ray stopped at the image border.
    pub hit_is_edge: bool,
}

/// Far endpoint used to turn an angle into an integer line.
fn ray_target(image: &EdgeImage, origin: Point, angle: f64) -> Point {
    let reach = 2.0 * (image.width() + image.height()) as f64;
    Point::new(
        origin.x + (reach * angle.cos()).round() as i64,
        origin.y + (reach * angle.sin()).round() as i64,
    )
}

/// Casts a ray from `origin` at `angle` radians (measured from +x toward +y,
/// i.e. clockwise on screen) until it meets an edge pixel or the border.
///
/// A diagonal step squeezing between two edge pixels that touch at a
/// corner counts as meeting an edge, so 8-connected contours stop rays.
pub fn cast_ray(image: &EdgeImage, origin: Point, angle: f64) -> Result<RayHit> {
    cast_ray_visit(image, origin, angle, |_| {})
}

/// Like [`cast_ray`], also reporting every free pixel the ray traversed,
/// from the origin through `last_free`.
pub fn cast_ray_visit(image: &EdgeImage, origin: Point, angle: f64, mut visit: impl FnMut(Point)) -> Result<RayHit> {
    image.check_bounds(origin)?;
    if image.is_edge(origin) {
        return Ok(RayHit {
            hit: origin,
            last_free: origin,
            length: 0.0,
            hit_is_edge: true,
        });
    }
    visit(origin);
    let mut last_free = origin;
    let mut walk = LineWalk::new(origin, ray_target(image, origin, angle));
    let x_major = walk.x_major();
    walk.next();
    for p in walk {
        if !image.in_bounds(p) {
            break;
        }
        let blocked = if image.is_edge(p) {
            Some(p)
        } else {
            corner_block(image, last_free, p, x_major)
        };
        if let Some(hit) = blocked {
            return Ok(RayHit {
                hit,
                last_free,
                length: origin.distance(last_free),
                hit_is_edge: true,
            });
        }
        visit(p);
        last_free = p;
    }
    Ok(RayHit {
        hit: last_free,
        last_free,
        length: origin.distance(last_free),
        hit_is_edge: false,
    })
}

/// Walks from `from` toward `to` (rounded to the nearest pixel and clamped
/// into the image) and returns the last free pixel reached before arriving
/// or meeting an edge.
pub fn step_toward(image: &EdgeImage, from: Point, to: FPoint) -> Result<Point> {
    image.check_free(from)?;
    let target = clamp_into(image, to.round());
    let mut last = from;
    let walk = LineWalk::new(from, target);
    let x_major = walk.x_major();
    for p in walk.skip(1) {
        if image.is_edge(p) || corner_block(image, last, p, x_major).is_some() {
            break;
        }
        last = p;
    }
    Ok(last)
}

fn clamp_into(image: &EdgeImage, p: Point) -> Point {
    Point::new(
        p.x.clamp(0, image.width() as i64 - 1),
        p.y.clamp(0, image.height() as i64 - 1),
    )
}
