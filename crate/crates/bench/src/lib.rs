//! Fixture scenes shared by the benchmarks.

use projfeat::{generate, HandSpec, Point, Scene, SceneSpec};

/// The 101x101 circle of radius 30.
pub fn circle() -> Scene {
    generate(&SceneSpec::circle(101, 101, Point::new(50, 50), 30)).expect("circle fixture")
}

/// A five-finger hand filling most of a 640x480 frame.
pub fn large_hand() -> Scene {
    let hand = HandSpec {
        palm_radius: 90,
        fingers: 5,
        finger_length: 120.0,
        finger_width: 40.0,
        rotation: 0.0,
    };
    generate(&SceneSpec::hand(640, 480, Point::new(320, 290), hand)).expect("hand fixture")
}
