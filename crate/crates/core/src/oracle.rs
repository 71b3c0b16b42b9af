//! Exhaustive ground truth for a closed contour.
//!
//! The labeling here is a span (scanline) fill written independently of the
//! breadth-first fills in [`crate::fill`], so comparing the two is a real
//! check rather than a tautology.

use crate::error::{Error, Result};
use crate::image::{EdgeImage, FPoint, Point, PointMean};

/// Exact interior pixel set of the contour around a seed.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    /// Interior pixels in row-major order.
    pub interior: Vec<Point>,
    pub centroid: FPoint,
    pub area: usize,
    /// Region id per interior pixel, parallel to `interior`. All zero unless
    /// the scene generator labeled sub-regions (palm = 0, finger k = k + 1).
    pub region_labels: Vec<u32>,
    mask: Vec<bool>,
    width: usize,
}

impl GroundTruth {
    pub fn contains(&self, p: Point) -> bool {
        p.x >= 0
            && p.y >= 0
            && (p.x as usize) < self.width
            && self
                .mask
                .get(p.y as usize * self.width + p.x as usize)
                .copied()
                .unwrap_or(false)
    }

    pub fn region_of(&self, p: Point) -> Option<u32> {
        self.interior
            .binary_search_by(|q| (q.y, q.x).cmp(&(p.y, p.x)))
            .ok()
            .map(|i| self.region_labels[i])
    }

    /// Number of interior pixels carrying `label`.
    pub fn region_area(&self, label: u32) -> usize {
        self.region_labels.iter().filter(|&&l| l == label).count()
    }

    pub(crate) fn set_labels(&mut self, mut label: impl FnMut(Point) -> u32) {
        self.region_labels = self.interior.iter().map(|&p| label(p)).collect();
    }

    /// Recomputes the mean of `interior`.
    pub fn recompute_centroid(&self) -> FPoint {
        self.interior
            .iter()
            .copied()
            .collect::<PointMean>()
            .mean()
            .unwrap_or_default()
    }

    /// The same interior shifted by an integer offset.
    pub fn translated(&self, dx: i64, dy: i64, width: usize, height: usize) -> Result<GroundTruth> {
        let mut mask = vec![false; width * height];
        let mut interior = Vec::with_capacity(self.interior.len());
        for p in &self.interior {
            let q = Point::new(p.x + dx, p.y + dy);
            if q.x < 0 || q.y < 0 || q.x as usize >= width || q.y as usize >= height {
                return Err(Error::Scene(format!(
                    "translated interior leaves the {width}x{height} frame"
                )));
            }
            mask[q.y as usize * width + q.x as usize] = true;
            interior.push(q);
        }
        Ok(GroundTruth {
            centroid: FPoint::new(self.centroid.x + dx as f64, self.centroid.y + dy as f64),
            area: self.area,
            region_labels: self.region_labels.clone(),
            interior,
            mask,
            width,
        })
    }
}

/// Labels the 4-connected free region containing `seed`.
///
/// Fails with [`Error::OpenContour`] when that region reaches the border.
pub fn compute_ground_truth(image: &EdgeImage, seed: Point) -> Result<GroundTruth> {
    image.check_free(seed)?;
    let (w, h) = (image.width() as i64, image.height() as i64);
    let mut mask = vec![false; image.width() * image.height()];
    let free = |x: i64, y: i64, mask: &[bool]| {
        let i = (y * w + x) as usize;
        !image.edges()[i] && !mask[i]
    };

    let mut stack = vec![(seed.x, seed.y)];
    while let Some((x, y)) = stack.pop() {
        if !free(x, y, &mask) {
            continue;
        }
        let mut left = x;
        while left > 0 && free(left - 1, y, &mask) {
            left -= 1;
        }
        let mut right = x;
        while right + 1 < w && free(right + 1, y, &mask) {
            right += 1;
        }
        if left == 0 || right == w - 1 || y == 0 || y == h - 1 {
            return Err(Error::OpenContour(seed));
        }
        for xi in left..=right {
            mask[(y * w + xi) as usize] = true;
        }
        for ny in [y - 1, y + 1] {
            let mut in_run = false;
            for xi in left..=right {
                let open = free(xi, ny, &mask);
                if open && !in_run {
                    stack.push((xi, ny));
                }
                in_run = open;
            }
        }
    }

    let interior: Vec<Point> = mask
        .iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(i, _)| image.point_at(i))
        .collect();
    let centroid = interior
        .iter()
        .copied()
        .collect::<PointMean>()
        .mean()
        .unwrap_or_else(|| seed.to_fpoint());
    Ok(GroundTruth {
        area: interior.len(),
        region_labels: vec![0; interior.len()],
        centroid,
        interior,
        mask,
        width: image.width(),
    })
}
