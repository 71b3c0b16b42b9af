//! Pixel coordinates and the binary edge raster.
//!
//! Coordinates follow the raster convention: `x` grows rightward, `y` grows
//! downward, `(0, 0)` is the top-left pixel and storage is row-major.

use crate::error::{Error, Result};

/// Integer pixel coordinate.
///
/// Signed so that line walks may step past the border before being clipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub fn to_fpoint(self) -> FPoint {
        FPoint::new(self.x as f64, self.y as f64)
    }

    pub fn distance(self, other: Point) -> f64 {
        self.to_fpoint().distance(other.to_fpoint())
    }
}

/// Real-valued image coordinate, used for centroids.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FPoint {
    pub x: f64,
    pub y: f64,
}

impl FPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        FPoint { x, y }
    }

    pub fn distance(self, other: FPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Nearest pixel, rounding halves away from zero.
    pub fn round(self) -> Point {
        Point::new(self.x.round() as i64, self.y.round() as i64)
    }
}

/// Accumulates integer pixel positions and yields their exact mean.
///
/// Sums are kept in integers so the mean does not depend on visiting order.
#[derive(Debug, Clone, Copy, Default)]
pub struct PointMean {
    sum_x: i128,
    sum_y: i128,
    count: u64,
}

impl PointMean {
    pub fn push(&mut self, p: Point) {
        self.sum_x += p.x as i128;
        self.sum_y += p.y as i128;
        self.count += 1;
    }

    /// Adds a point given in doubled coordinates (for half-pixel block centers).
    pub(crate) fn push_doubled(&mut self, twice: Point) {
        self.sum_x += twice.x as i128;
        self.sum_y += twice.y as i128;
        self.count += 2;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> Option<FPoint> {
        (self.count > 0).then(|| {
            FPoint::new(
                self.sum_x as f64 / self.count as f64,
                self.sum_y as f64 / self.count as f64,
            )
        })
    }
}

impl FromIterator<Point> for PointMean {
    fn from_iter<I: IntoIterator<Item = Point>>(iter: I) -> Self {
        let mut acc = PointMean::default();
        for p in iter {
            acc.push(p);
        }
        acc
    }
}

pub const MIN_SIDE: usize = 3;

/// Immutable binary raster; `true` marks an edge pixel.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeImage {
    width: usize,
    height: usize,
    edges: Vec<bool>,
}

impl EdgeImage {
    pub fn new(width: usize, height: usize, edges: Vec<bool>) -> Result<Self> {
        if width < MIN_SIDE || height < MIN_SIDE {
            return Err(Error::InvalidImage(format!(
                "image must be at least {MIN_SIDE}x{MIN_SIDE}, got {width}x{height}"
            )));
        }
        if edges.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "raster has {} entries, expected {}",
                edges.len(),
                width * height
            )));
        }
        Ok(EdgeImage { width, height, edges })
    }

    /// An image with no edge pixels.
    pub fn blank(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width * height])
    }

    /// Builds an image by evaluating `is_edge` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut is_edge: impl FnMut(Point) -> bool) -> Result<Self> {
        let mut edges = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                edges.push(is_edge(Point::new(x as i64, y as i64)));
            }
        }
        Self::new(width, height, edges)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn edges(&self) -> &[bool] {
        &self.edges
    }

    pub fn in_bounds(&self, p: Point) -> bool {
        p.x >= 0 && p.y >= 0 && (p.x as usize) < self.width && (p.y as usize) < self.height
    }

    pub fn on_border(&self, p: Point) -> bool {
        p.x == 0 || p.y == 0 || p.x as usize == self.width - 1 || p.y as usize == self.height - 1
    }

    /// Row-major index of an in-bounds point.
    pub fn index(&self, p: Point) -> usize {
        debug_assert!(self.in_bounds(p));
        p.y as usize * self.width + p.x as usize
    }

    pub fn point_at(&self, index: usize) -> Point {
        Point::new((index % self.width) as i64, (index / self.width) as i64)
    }

    /// Edge lookup; out-of-bounds points read as non-edge.
    pub fn is_edge(&self, p: Point) -> bool {
        self.in_bounds(p) && self.edges[self.index(p)]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|&&e| e).count()
    }

    pub fn edge_points(&self) -> impl Iterator<Item = Point> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &e)| e)
            .map(|(i, _)| self.point_at(i))
    }

    pub fn diagonal(&self) -> f64 {
        (self.width as f64).hypot(self.height as f64)
    }

    /// Returns a copy with the listed pixels set to `value`.
    pub fn with_pixels(&self, pixels: impl IntoIterator<Item = Point>, value: bool) -> Result<Self> {
        let mut edges = self.edges.clone();
        for p in pixels {
            self.check_bounds(p)?;
            edges[self.index(p)] = value;
        }
        Self::new(self.width, self.height, edges)
    }

    pub fn check_bounds(&self, p: Point) -> Result<()> {
        if self.in_bounds(p) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                point: p,
                width: self.width,
                height: self.height,
            })
        }
    }

    /// Precondition shared by every estimator: in-bounds and not an edge.
    pub fn check_free(&self, p: Point) -> Result<()> {
        self.check_bounds(p)?;
        if self.is_edge(p) {
            return Err(Error::EdgePixel(p));
        }
        Ok(())
    }

    /// The up/down/left/right neighbors that lie inside the image.
    pub fn neighbors4(&self, p: Point) -> impl Iterator<Item = Point> + '_ {
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .into_iter()
            .map(move |(dx, dy)| Point::new(p.x + dx, p.y + dy))
            .filter(move |q| self.in_bounds(*q))
    }
}
