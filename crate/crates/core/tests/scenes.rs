use std::f64::consts::{PI, TAU};

use projfeat::raycast::cascade_origins;
use projfeat::{
    cast_ray, compute_ground_truth, estimate_grid_fill, estimate_iterative_n_ray, estimate_n_ray, estimate_ny_ray,
    estimate_pixel_fill, generate, inject_noise, simulate, EstimatorConfig, HandSpec, Method, MotionSpec, NoiseSpec,
    Point, Scene, SceneSpec,
};

fn hand() -> Scene {
    let spec = HandSpec {
        palm_radius: 35,
        fingers: 4,
        finger_length: 45.0,
        finger_width: 18.0,
        rotation: 0.0,
    };
    generate(&SceneSpec::hand(201, 201, Point::new(100, 125), spec)).unwrap()
}

fn all_shapes() -> Vec<Scene> {
    let c = Point::new(60, 60);
    [
        SceneSpec::circle(121, 121, c, 40),
        SceneSpec::square(121, 121, c, 35),
        SceneSpec::ellipse(121, 121, c, 45.0, 25.0, 0.7),
        SceneSpec::hand(
            121,
            121,
            Point::new(60, 75),
            HandSpec {
                palm_radius: 20,
                fingers: 5,
                finger_length: 25.0,
                finger_width: 10.0,
                rotation: 0.2,
            },
        ),
    ]
    .iter()
    .map(|s| generate(s).unwrap())
    .collect()
}

#[test]
fn oracle_centroid_matches_analytic_center() {
    for r in [10, 20, 30, 40] {
        let center = Point::new(50, 50);
        let s = generate(&SceneSpec::circle(101, 101, center, r)).unwrap();
        let truth = compute_ground_truth(&s.image, s.inner).unwrap();
        assert!(truth.centroid.distance(center.to_fpoint()) < 0.5, "r={r}");
        assert_eq!(truth.centroid, truth.recompute_centroid());
    }
}

#[test]
fn generation_and_noise_are_deterministic() {
    for s in all_shapes() {
        let again = generate(&s.spec).unwrap();
        assert_eq!(again.image, s.image);
        assert_eq!(again.inner, s.inner);
        let noise = NoiseSpec {
            drop_count: 7,
            seed: 11,
        };
        assert_eq!(
            inject_noise(&s.image, noise).unwrap(),
            inject_noise(&s.image, noise).unwrap()
        );
    }
}

#[test]
fn ground_inner_is_enclosed() {
    let cfg = EstimatorConfig::default();
    for s in all_shapes() {
        for seed in s.seed_points() {
            assert!(!s.image.is_edge(seed));
            assert_eq!(compute_ground_truth(&s.image, seed).unwrap().area, s.truth.area);
        }
        assert!(!estimate_pixel_fill(&s.image, s.inner, &cfg).unwrap().diagnostics.leaked);
        assert!(!estimate_grid_fill(&s.image, s.inner, &cfg).unwrap().diagnostics.leaked);
    }
}

#[test]
fn fingertip_is_narrower_than_palm() {
    let s = hand();
    let tip = s.fingertip.unwrap();
    assert_ne!(s.truth.region_of(tip), Some(0));
    let narrowest = (0..32)
        .map(|k| {
            let a = k as f64 * PI / 32.0;
            let fwd = cast_ray(&s.image, tip, a).unwrap();
            let back = cast_ray(&s.image, tip, a + PI).unwrap();
            fwd.last_free.distance(back.last_free) + 1.0
        })
        .fold(f64::INFINITY, f64::min);
    assert!(narrowest < 70.0, "{narrowest}");
}

#[test]
fn cascade_concentrates_in_the_finger() {
    let s = hand();
    let tip = s.fingertip.unwrap();
    let finger = s.truth.region_of(tip).unwrap();
    let cfg = EstimatorConfig {
        n: 16,
        ..EstimatorConfig::default()
    };
    let origins = cascade_origins(&s.image, tip, &cfg).unwrap();
    let inside = origins
        .iter()
        .filter(|p| s.truth.region_of(**p) == Some(finger))
        .count();
    let density = inside as f64 / origins.len() as f64;
    let share = s.truth.region_area(finger) as f64 / s.truth.area as f64;
    assert!(density > share, "{density} vs {share}");
}

#[test]
fn iteration_pulls_fingertip_seed_into_palm() {
    let s = hand();
    let f = estimate_iterative_n_ray(&s.image, s.fingertip.unwrap(), &EstimatorConfig::default()).unwrap();
    assert_eq!(s.truth.region_of(f.inner), Some(0));
    let once = estimate_n_ray(&s.image, s.fingertip.unwrap(), &EstimatorConfig::default()).unwrap();
    assert!(f.centroid.distance(s.truth.centroid) < once.centroid.distance(s.truth.centroid));
}

#[test]
fn ray_estimators_ignore_angle_offset_at_center() {
    let s = generate(&SceneSpec::circle(101, 101, Point::new(50, 50), 30)).unwrap();
    for k in 0..16 {
        let cfg = EstimatorConfig {
            n: 16,
            angle_offset: k as f64 * TAU / 16.0 / 16.0,
            ..EstimatorConfig::default()
        };
        for estimate in [estimate_n_ray, estimate_iterative_n_ray, estimate_ny_ray] {
            let f = estimate(&s.image, s.inner, &cfg).unwrap();
            assert!(f.centroid.distance(s.truth.centroid) < 1.5, "k={k}");
        }
    }
}

#[test]
fn cascade_rays_respect_geometric_bound() {
    let s = hand();
    for n in [3, 8, 16] {
        let cfg = EstimatorConfig {
            n,
            y: if n > 8 { 2 } else { 3 },
            ..EstimatorConfig::default()
        };
        let f = estimate_ny_ray(&s.image, s.fingertip.unwrap(), &cfg).unwrap();
        // plus the closing recenter pass of n rays
        let bound = f.iterations as u64 * cfg.cascade_ray_bound() + n as u64;
        assert!(f.rays_cast <= bound, "n={n}: {} > {bound}", f.rays_cast);
    }
}

#[test]
fn estimators_are_pure() {
    let s = hand();
    let cfg = EstimatorConfig::default();
    for method in Method::ALL {
        let a = method.estimate(&s.image, s.fingertip.unwrap(), &cfg).unwrap();
        assert_eq!(
            a,
            method.estimate(&s.image, s.fingertip.unwrap(), &cfg).unwrap(),
            "{method}"
        );
    }
}

#[test]
fn survival_is_deterministic() {
    let motion = MotionSpec {
        frames: 12,
        velocity: (3, 1),
        scene: SceneSpec::circle(140, 101, Point::new(40, 45), 25),
        noise_drop: 4,
        master_seed: 5,
    };
    for method in [Method::NRay, Method::GridFill] {
        let cfg = EstimatorConfig::default();
        assert_eq!(
            simulate(&motion, method, &cfg).unwrap(),
            simulate(&motion, method, &cfg).unwrap()
        );
    }
}
