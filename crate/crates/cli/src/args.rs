use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use projfeat::{EstimatorConfig, HandSpec, Method, Point, SceneSpec};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "projfeat",
    version,
    about = "Object projection feature estimation over edge images"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a synthetic scene to PGM and print its ground inner point(s).
    Generate(GenerateArgs),
    /// Run one estimator on a PGM edge image.
    Estimate(EstimateArgs),
    /// Run a declared sweep and write metrics CSV.
    Bench(BenchArgs),
    /// Track a translating scene frame by frame.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Circle,
    Square,
    Ellipse,
    Hand,
}

/// Scene geometry, shared by the `generate`/`simulate` flags and suite files.
#[derive(Debug, Clone, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneArgs {
    #[arg(long, value_enum, default_value = "circle")]
    pub shape: ShapeKind,
    #[arg(long, default_value_t = 101)]
    pub width: usize,
    #[arg(long, default_value_t = 101)]
    pub height: usize,
    /// Defaults to the image center.
    #[arg(long)]
    pub cx: Option<i64>,
    #[arg(long)]
    pub cy: Option<i64>,
    #[arg(long, default_value_t = 30)]
    pub radius: i64,
    #[arg(long, default_value_t = 20)]
    pub half_side: i64,
    #[arg(long, default_value_t = 35.0)]
    pub semi_major: f64,
    #[arg(long, default_value_t = 20.0)]
    pub semi_minor: f64,
    /// Radians; ellipse and hand only.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub rotation: f64,
    #[arg(long, default_value_t = 35)]
    pub palm_radius: i64,
    #[arg(long, default_value_t = 4)]
    pub fingers: u32,
    #[arg(long, default_value_t = 45.0)]
    pub finger_length: f64,
    #[arg(long, default_value_t = 18.0)]
    pub finger_width: f64,
}

impl Default for SceneArgs {
    fn default() -> Self {
        SceneArgs {
            shape: ShapeKind::Circle,
            width: 101,
            height: 101,
            cx: None,
            cy: None,
            radius: 30,
            half_side: 20,
            semi_major: 35.0,
            semi_minor: 20.0,
            rotation: 0.0,
            palm_radius: 35,
            fingers: 4,
            finger_length: 45.0,
            finger_width: 18.0,
        }
    }
}

impl SceneArgs {
    pub fn to_spec(&self) -> SceneSpec {
        let center = Point::new(
            self.cx.unwrap_or(self.width as i64 / 2),
            self.cy.unwrap_or(self.height as i64 / 2),
        );
        let (w, h) = (self.width, self.height);
        match self.shape {
            ShapeKind::Circle => SceneSpec::circle(w, h, center, self.radius),
            ShapeKind::Square => SceneSpec::square(w, h, center, self.half_side),
            ShapeKind::Ellipse => SceneSpec::ellipse(w, h, center, self.semi_major, self.semi_minor, self.rotation),
            ShapeKind::Hand => SceneSpec::hand(
                w,
                h,
                center,
                HandSpec {
                    palm_radius: self.palm_radius,
                    fingers: self.fingers,
                    finger_length: self.finger_length,
                    finger_width: self.finger_width,
                    rotation: self.rotation,
                },
            ),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    #[arg(long, default_value_t = 32)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub y: u32,
    #[arg(long, default_value_t = 8)]
    pub m: usize,
    #[arg(long, default_value_t = 10)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub angle_offset: f64,
}

impl ConfigArgs {
    pub fn to_config(&self) -> EstimatorConfig {
        EstimatorConfig {
            n: self.n,
            y: self.y,
            m: self.m,
            max_iter: self.max_iter,
            epsilon: self.epsilon,
            angle_offset: self.angle_offset,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: projfeat::Error| e.to_string())
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected X,Y, got '{s}'"))?;
    let num = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("'{t}': {e}"));
    Ok((num(a)?, num(b)?))
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Edge pixels to delete after rendering.
    #[arg(long, default_value_t = 0)]
    pub noise_drop: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    #[arg(long)]
    pub image: PathBuf,
    /// Inner point as X,Y.
    #[arg(long, value_parser = parse_pair)]
    pub inner: (i64, i64),
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub suite: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Rows measured concurrently; keep at 1 for comparable runtimes.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Per-frame translation as DX,DY.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub velocity: (i64, i64),
    #[arg(long)]
    pub frames: usize,
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, default_value_t = 0)]
    pub noise_drop: usize,
    /// Master seed for per-frame noise.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Write every frame the estimator saw as PGM into this directory.
    #[arg(long)]
    pub dump_dir: Option<PathBuf>,
}
