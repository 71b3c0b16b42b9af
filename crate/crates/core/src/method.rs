use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fill::{calibrated_grid_area, estimate_grid_fill, estimate_pixel_fill};
use crate::image::{EdgeImage, Point};
use crate::raycast::{
    estimate_iterative_n_ray, estimate_n_ray, estimate_ny_raster, estimate_ny_ray, EstimatorConfig, Features,
};

/// The six feature estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    NRay,
    IterNRay,
    NyRay,
    NyRaster,
    PixelFill,
    GridFill,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::NRay,
        Method::IterNRay,
        Method::NyRay,
        Method::NyRaster,
        Method::PixelFill,
        Method::GridFill,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::NRay => "nray",
            Method::IterNRay => "iter-nray",
            Method::NyRay => "ny-ray",
            Method::NyRaster => "ny-raster",
            Method::PixelFill => "pixel-fill",
            Method::GridFill => "grid-fill",
        }
    }

    pub fn estimate(self, image: &EdgeImage, inner: Point, cfg: &EstimatorConfig) -> Result<Features> {
        match self {
            Method::NRay => estimate_n_ray(image, inner, cfg),
            Method::IterNRay => estimate_iterative_n_ray(image, inner, cfg),
            Method::NyRay => estimate_ny_ray(image, inner, cfg),
            Method::NyRaster => estimate_ny_raster(image, inner, cfg),
            Method::PixelFill => estimate_pixel_fill(image, inner, cfg),
            Method::GridFill => estimate_grid_fill(image, inner, cfg),
        }
    }

    pub fn is_fill(self) -> bool {
        matches!(self, Method::PixelFill | Method::GridFill)
    }

    /// Queue pushes for fills, rays cast otherwise.
    pub fn work_counter(self, features: &Features) -> u64 {
        if self.is_fill() {
            features.diagnostics.queue_pushes
        } else {
            features.rays_cast
        }
    }

    /// Maps this method's raw area measure onto pixel units, assuming the
    /// nominal ray count (`n`, or `n^y` for `ny-ray`).
    ///
    /// Ray-length sums are read as radii of a disk, `pi * (sum / rays)^2`;
    /// this is a comparison convention only.
    pub fn comparable_area(self, raw: f64, cfg: &EstimatorConfig) -> f64 {
        let nominal = match self {
            Method::NyRay => (cfg.n as f64).powi(cfg.y as i32),
            _ => cfg.n as f64,
        };
        self.comparable_area_with_rays(raw, cfg, nominal)
    }

    /// Like [`Method::comparable_area`] but with the ray count actually
    /// backing the estimate (its `support`).
    pub fn comparable_area_of(self, features: &Features, cfg: &EstimatorConfig) -> f64 {
        self.comparable_area_with_rays(features.area, cfg, features.support.max(1) as f64)
    }

    fn comparable_area_with_rays(self, raw: f64, cfg: &EstimatorConfig, rays: f64) -> f64 {
        match self {
            Method::PixelFill | Method::NyRaster => raw,
            Method::GridFill => calibrated_grid_area(raw as usize, cfg.m),
            Method::NRay | Method::IterNRay | Method::NyRay => std::f64::consts::PI * (raw / rays).powi(2),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown method '{s}'")))
    }
}
