//! Object projection feature estimation over binary edge images.
//!
//! Given an edge image and a point inside the tracked object's projection
//! (the *inner point*), every estimator here returns a centroid, an area
//! measure and an updated inner point. Four estimators probe the projection
//! with rays cast from the inner point; two fill it.
//!
//! | method       | probe                                   | area measure          |
//! |--------------|-----------------------------------------|-----------------------|
//! | `nray`       | `n` rays, once                          | sum of ray lengths    |
//! | `iter-nray`  | `n` rays, repeated until stationary     | sum of ray lengths    |
//! | `ny-ray`     | `n` rays recast `y` levels deep         | sum of ray lengths    |
//! | `ny-raster`  | as `ny-ray`, traversed `m`x`m` blocks   | blocks x `m`^2        |
//! | `pixel-fill` | 4-connected flood fill                  | marked pixels         |
//! | `grid-fill`  | flood fill restricted to an `m` lattice | marked grid pixels    |

pub mod error;
pub mod fill;
pub mod image;
pub mod method;
pub mod metrics;
pub mod oracle;
pub mod pgm;
pub mod raster;
pub mod raycast;
pub mod scene;
pub mod tracking;

pub use error::{Error, Result};
pub use fill::{estimate_grid_fill, estimate_pixel_fill, grid_fill, pixel_fill, FillResult};
pub use image::{EdgeImage, FPoint, Point};
pub use method::Method;
pub use metrics::{comparable_area, evaluate, stability_sweep, MetricsRow, Observation, StabilityReport};
pub use oracle::{compute_ground_truth, GroundTruth};
pub use pgm::{load_pgm, save_pgm};
pub use raster::{cast_ray, step_toward, LineWalk, RayHit};
pub use raycast::{
    estimate_iterative_n_ray, estimate_n_ray, estimate_ny_raster, estimate_ny_ray, recenter_inner_point, Diagnostics,
    EstimatorConfig, Features,
};
pub use scene::{generate, inject_noise, HandSpec, NoiseSpec, Scene, SceneSpec, Shape};
pub use tracking::{simulate, simulate_with, FrameRecord, MotionSpec, TrackReport};
