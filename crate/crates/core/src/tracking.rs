//! Frame-sequence simulation of the inner-point tracking loop.

use crate::error::{Error, Result};
use crate::image::{EdgeImage, Point};
use crate::method::Method;
use crate::raycast::{EstimatorConfig, Features};
use crate::scene::{derive_seed, generate, inject_noise, NoiseSpec, SceneSpec};

/// A shape translating at constant integer velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionSpec {
    pub frames: usize,
    pub velocity: (i64, i64),
    pub scene: SceneSpec,
    /// Edge pixels deleted per frame.
    pub noise_drop: usize,
    /// Frame `t` uses noise seed `derive_seed(master_seed, t)`.
    pub master_seed: u64,
}

impl MotionSpec {
    pub fn frame_scene(&self, t: usize) -> SceneSpec {
        let t = t as i64;
        self.scene.translated(self.velocity.0 * t, self.velocity.1 * t)
    }

    pub fn frame_noise(&self, t: usize) -> NoiseSpec {
        NoiseSpec {
            drop_count: self.noise_drop,
            seed: derive_seed(self.master_seed, t as u64),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.frames < 2 {
            return Err(Error::Argument(format!("need at least 2 frames, got {}", self.frames)));
        }
        // the shape moves on a line, so both ends fitting means every frame fits
        for t in [0, self.frames - 1] {
            generate(&self.frame_scene(t))
                .map_err(|e| Error::Argument(format!("frame {t} does not fit the image: {e}")))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameRecord {
    pub frame: usize,
    /// Inner point handed to the estimator.
    pub fed_inner: Point,
    /// `fed_inner` lies inside the clean projection of this frame.
    pub inside: bool,
    pub features: Option<Features>,
    pub centroid_error: Option<f64>,
    /// Why tracking was lost on this frame.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackReport {
    pub method: Method,
    pub frames: Vec<FrameRecord>,
    /// Index of the first failed frame, or the frame count if none failed.
    pub survival: usize,
}

pub fn simulate(motion: &MotionSpec, method: Method, cfg: &EstimatorConfig) -> Result<TrackReport> {
    simulate_with(motion, method, cfg, |_, _| Ok(()))
}

/// [`simulate`], handing every frame's (noisy) image to `on_frame`.
pub fn simulate_with(
    motion: &MotionSpec,
    method: Method,
    cfg: &EstimatorConfig,
    mut on_frame: impl FnMut(usize, &EdgeImage) -> Result<()>,
) -> Result<TrackReport> {
    motion.validate()?;
    cfg.validate()?;
    let mut frames = Vec::with_capacity(motion.frames);
    let mut fed = None;
    for t in 0..motion.frames {
        let scene = generate(&motion.frame_scene(t))?;
        let image = inject_noise(&scene.image, motion.frame_noise(t))?;
        on_frame(t, &image)?;
        let fed_inner = fed.unwrap_or(scene.inner);
        let inside = scene.truth.contains(fed_inner);
        let failure = if !inside {
            Some("inner point outside the projection".to_string())
        } else if image.is_edge(fed_inner) {
            Some("inner point is an edge pixel".to_string())
        } else {
            None
        };
        let estimate = match failure {
            Some(reason) => Err(reason),
            None => method.estimate(&image, fed_inner, cfg).map_err(|e| e.to_string()),
        };
        match estimate {
            Ok(features) => {
                fed = Some(features.inner);
                frames.push(FrameRecord {
                    frame: t,
                    fed_inner,
                    inside,
                    centroid_error: Some(features.centroid.distance(scene.truth.centroid)),
                    features: Some(features),
                    failure: None,
                });
            }
            Err(reason) => {
                frames.push(FrameRecord {
                    frame: t,
                    fed_inner,
                    inside,
                    features: None,
                    centroid_error: None,
                    failure: Some(reason),
                });
                return Ok(TrackReport {
                    method,
                    frames,
                    survival: t,
                });
            }
        }
    }
    Ok(TrackReport {
        method,
        survival: motion.frames,
        frames,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn motion(velocity: (i64, i64), frames: usize, width: usize) -> MotionSpec {
        MotionSpec {
            frames,
            velocity,
            scene: SceneSpec::circle(width, 101, Point::new(50, 50), 30),
            noise_drop: 0,
            master_seed: 1,
        }
    }

    #[test]
    fn static_object_is_never_lost() {
        let cfg = EstimatorConfig::default();
        for method in Method::ALL {
            let r = simulate(&motion((0, 0), 5, 101), method, &cfg).unwrap();
            assert_eq!(r.survival, 5, "{method}");
        }
    }

    #[test]
    fn static_frames_match_single_estimate() {
        let cfg = EstimatorConfig::default();
        let m = motion((0, 0), 2, 101);
        let scene = generate(&m.scene).unwrap();
        let single = Method::GridFill.estimate(&scene.image, scene.inner, &cfg).unwrap();
        let r = simulate(&m, Method::GridFill, &cfg).unwrap();
        assert_eq!(r.frames[0].features.as_ref(), Some(&single));
        assert_eq!(
            r.frames[0].centroid_error,
            Some(single.centroid.distance(scene.truth.centroid))
        );
    }

    #[test]
    fn disjoint_jump_loses_track() {
        let cfg = EstimatorConfig::default();
        for method in Method::ALL {
            let r = simulate(&motion((70, 0), 3, 300), method, &cfg).unwrap();
            assert!(r.survival <= 2, "{method}");
            assert!(!r.frames.last().unwrap().inside);
        }
    }

    #[test]
    fn invalid_motion_is_rejected() {
        let cfg = EstimatorConfig::default();
        assert!(simulate(&motion((0, 0), 1, 101), Method::NRay, &cfg).is_err());
        assert!(simulate(&motion((5, 0), 20, 101), Method::NRay, &cfg).is_err());
    }
}
