//! Benchmark suite files.
//!
//! A suite is a TOML document with one `[[scene]]` table per scene and a
//! single `[sweep]` table of axes:
//!
//! ```toml
//! repetitions = 5            # timed runs per row, at least 5
//!
//! [[scene]]
//! id = "circle"
//! shape = "circle"           # any `generate` flag, with underscores
//! radius = 30
//!
//! [sweep]
//! methods = ["nray", "grid-fill"]
//! n = [16, 32]
//! y = [2]
//! m = [8]
//! max_iter = [10]
//! noise_drop = [0, 1]
//! seeds = [0, 1, 2]
//! epsilon = 0.5              # scalar, optional
//! angle_offset = 0.0         # scalar, optional
//! ```
//!
//! Rows are the Cartesian product in the order scene, noise_drop, seed,
//! method, n, y, m, max_iter. Every method gets every parameter tuple even
//! when it ignores some of the parameters. `seed` feeds the noise injector;
//! a clean row repeats identically across seeds. The scene column reads
//! `<id>/drop<k>`.

use projfeat::{evaluate, generate, inject_noise, EstimatorConfig, Method, MetricsRow, NoiseSpec, Observation, Scene};
use rayon::prelude::*;
use serde::Deserialize;

use crate::args::SceneArgs;
use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct Suite {
    pub repetitions: usize,
    pub scenes: Vec<SuiteScene>,
    pub sweep: Sweep,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSuite {
    #[serde(default = "default_repetitions")]
    repetitions: usize,
    #[serde(default)]
    scene: Vec<toml::Table>,
    sweep: Sweep,
}

fn default_repetitions() -> usize {
    5
}

#[derive(Debug, Clone)]
pub struct SuiteScene {
    pub id: String,
    pub params: SceneArgs,
}

impl SuiteScene {
    fn from_table(index: usize, mut table: toml::Table) -> Result<SuiteScene, CliError> {
        let id = match table.remove("id") {
            Some(toml::Value::String(id)) => id,
            Some(_) => return Err(CliError::Suite(format!("scene {index}: id must be a string"))),
            None => return Err(CliError::Suite(format!("scene {index}: missing id"))),
        };
        let params = SceneArgs::deserialize(table).map_err(|e| CliError::Suite(format!("scene '{id}': {e}")))?;
        Ok(SuiteScene { id, params })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub methods: Vec<String>,
    #[serde(default = "default_n")]
    pub n: Vec<usize>,
    #[serde(default = "default_y")]
    pub y: Vec<u32>,
    #[serde(default = "default_m")]
    pub m: Vec<usize>,
    #[serde(default = "default_max_iter")]
    pub max_iter: Vec<usize>,
    #[serde(default = "default_noise")]
    pub noise_drop: Vec<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub angle_offset: Option<f64>,
}

fn default_n() -> Vec<usize> {
    vec![32]
}
fn default_y() -> Vec<u32> {
    vec![2]
}
fn default_m() -> Vec<usize> {
    vec![8]
}
fn default_max_iter() -> Vec<usize> {
    vec![10]
}
fn default_noise() -> Vec<usize> {
    vec![0]
}
fn default_seeds() -> Vec<u64> {
    vec![0]
}

/// One expanded row of the sweep.
#[derive(Debug, Clone)]
pub struct Job {
    pub scene: usize,
    pub noise_drop: usize,
    pub seed: u64,
    pub method: Method,
    pub cfg: EstimatorConfig,
}

impl Suite {
    pub fn parse(text: &str) -> Result<Suite, CliError> {
        let raw: RawSuite = toml::from_str(text).map_err(|e| CliError::Suite(e.to_string()))?;
        let suite = Suite {
            repetitions: raw.repetitions,
            scenes: raw
                .scene
                .into_iter()
                .enumerate()
                .map(|(i, t)| SuiteScene::from_table(i, t))
                .collect::<Result<_, _>>()?,
            sweep: raw.sweep,
        };
        if suite.scenes.is_empty() {
            return Err(CliError::Suite("no [[scene]] tables".into()));
        }
        let s = &suite.sweep;
        let axes = [
            ("methods", s.methods.len()),
            ("n", s.n.len()),
            ("y", s.y.len()),
            ("m", s.m.len()),
            ("max_iter", s.max_iter.len()),
            ("noise_drop", s.noise_drop.len()),
            ("seeds", s.seeds.len()),
        ];
        if let Some((name, _)) = axes.iter().find(|(_, len)| *len == 0) {
            return Err(CliError::Suite(format!("sweep axis '{name}' is empty")));
        }
        Ok(suite)
    }

    pub fn jobs(&self) -> Result<Vec<Job>, CliError> {
        let methods = self
            .sweep
            .methods
            .iter()
            .map(|m| m.parse::<Method>())
            .collect::<projfeat::Result<Vec<_>>>()?;
        let defaults = EstimatorConfig::default();
        let s = &self.sweep;
        let mut jobs = Vec::new();
        for scene in 0..self.scenes.len() {
            for &noise_drop in &s.noise_drop {
                for &seed in &s.seeds {
                    for &method in &methods {
                        for &n in &s.n {
                            for &y in &s.y {
                                for &m in &s.m {
                                    for &max_iter in &s.max_iter {
                                        let cfg = EstimatorConfig {
                                            n,
                                            y,
                                            m,
                                            max_iter,
                                            epsilon: s.epsilon.unwrap_or(defaults.epsilon),
                                            angle_offset: s.angle_offset.unwrap_or(defaults.angle_offset),
                                        };
                                        jobs.push(Job {
                                            scene,
                                            noise_drop,
                                            seed,
                                            method,
                                            cfg,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(jobs)
    }

    /// Generates every scene, evaluates every row, and returns rows in
    /// expansion order regardless of `threads`.
    pub fn run(&self, threads: usize) -> Result<Vec<MetricsRow>, CliError> {
        let scenes = self
            .scenes
            .iter()
            .map(|s| generate(&s.params.to_spec()))
            .collect::<projfeat::Result<Vec<Scene>>>()?;
        let jobs = self.jobs()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        pool.install(|| {
            jobs.par_iter()
                .map(|job| self.run_job(&scenes, job))
                .collect::<Result<Vec<_>, _>>()
        })
    }

    fn run_job(&self, scenes: &[Scene], job: &Job) -> Result<MetricsRow, CliError> {
        let scene = &scenes[job.scene];
        let noisy;
        let image = if job.noise_drop > 0 {
            noisy = inject_noise(
                &scene.image,
                NoiseSpec {
                    drop_count: job.noise_drop,
                    seed: job.seed,
                },
            )?;
            &noisy
        } else {
            &scene.image
        };
        let id = format!("{}/drop{}", self.scenes[job.scene].id, job.noise_drop);
        let seeds = scene.seed_points();
        let obs = Observation {
            image,
            truth: &scene.truth,
            seeds: &seeds,
            scene: &id,
            seed: job.seed,
            repetitions: self.repetitions,
        };
        Ok(evaluate(obs, job.method, &job.cfg)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SUITE: &str = r#"
        [[scene]]
        id = "c"
        shape = "circle"
        radius = 20
        width = 61
        height = 61

        [[scene]]
        id = "s"
        shape = "square"

        [sweep]
        methods = ["nray", "pixel-fill"]
        n = [8, 16]
        noise_drop = [0, 1]
        seeds = [3]
    "#;

    #[test]
    fn expands_cartesian_product() {
        let suite = Suite::parse(SUITE).unwrap();
        assert_eq!(suite.repetitions, 5);
        assert_eq!(suite.scenes[0].params.radius, 20);
        assert_eq!(suite.scenes[1].params.width, 101);
        let jobs = suite.jobs().unwrap();
        assert_eq!(jobs.len(), 2 * 2 * 2 * 2);
        assert_eq!(jobs[1].cfg.n, 16);
        assert_eq!(jobs[2].method, Method::PixelFill);
        assert_eq!(jobs[4].noise_drop, 1);
    }

    #[test]
    fn rejects_bad_suites() {
        assert!(matches!(
            Suite::parse("[sweep]\nmethods = []\n"),
            Err(CliError::Suite(_))
        ));
        let unknown = SUITE.replace("seeds = [3]", "seeds = [3]\nbogus = 1");
        assert!(Suite::parse(&unknown).is_err());
        let bad_key = SUITE.replace("radius = 20", "radious = 20");
        assert!(matches!(Suite::parse(&bad_key), Err(CliError::Suite(m)) if m.contains("'c'")));
        let bad_method = SUITE.replace("\"nray\"", "\"rays\"");
        assert!(Suite::parse(&bad_method).unwrap().jobs().is_err());
    }

    #[test]
    fn threads_do_not_reorder_rows() {
        let mut suite = Suite::parse(SUITE).unwrap();
        suite.scenes.truncate(1);
        let a = suite.run(1).unwrap();
        let b = suite.run(3).unwrap();
        let strip =
            |rows: &[MetricsRow]| -> Vec<Vec<String>> { rows.iter().map(|r| r.values()[..19].to_vec()).collect() };
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(a[4].scene, "c/drop1");
    }
}
