//! Command-line front end for `projfeat`.

pub mod args;
pub mod error;
pub mod record;
pub mod suite;

use std::fs;
use std::io::Write;
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use projfeat::{
    generate, inject_noise, load_pgm, save_pgm, simulate_with, EdgeImage, EstimatorConfig, Features, Method,
    MetricsRow, MotionSpec, NoiseSpec, Point, TrackReport,
};

use crate::args::{BenchArgs, Cli, Command, EstimateArgs, Format, GenerateArgs, SimulateArgs};
use crate::error::CliError;
use crate::record::{write_csv, Cell, Record};
use crate::suite::Suite;

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let line = rendered.lines().next().unwrap_or("usage error");
            let _ = writeln!(stderr, "{line}");
            return 1;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Generate(a) => cmd_generate(&a, stdout),
        Command::Estimate(a) => cmd_estimate(&a, stdout),
        Command::Bench(a) => cmd_bench(&a),
        Command::Simulate(a) => cmd_simulate(&a, stdout),
    }
}

fn emit_line(stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    writeln!(stdout, "{text}").map_err(|e| CliError::Output(e.to_string()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn point_cells(r: &mut Record, x: &'static str, y: &'static str, p: Option<Point>) {
    match p {
        Some(p) => r.push(x, Cell::int(p.x)).push(y, Cell::int(p.y)),
        None => r.push(x, Cell::Null).push(y, Cell::Null),
    };
}

fn cmd_generate(a: &GenerateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let scene = generate(&a.scene.to_spec())?;
    let image = if a.noise_drop > 0 {
        inject_noise(
            &scene.image,
            NoiseSpec {
                drop_count: a.noise_drop,
                seed: a.seed,
            },
        )?
    } else {
        scene.image.clone()
    };
    write_file(&a.out, &save_pgm(&image))?;
    let mut r = Record::default();
    r.push("shape", Cell::Text(scene.spec.shape.name().to_string()));
    point_cells(&mut r, "inner_x", "inner_y", Some(scene.inner));
    point_cells(&mut r, "fingertip_x", "fingertip_y", scene.fingertip);
    r.push("centroid_x", Cell::coord(scene.truth.centroid.x))
        .push("centroid_y", Cell::coord(scene.truth.centroid.y))
        .push("area", Cell::int(scene.truth.area));
    emit_line(stdout, &r.to_json()?)
}

/// Flat record of one estimate; `block_counts` is `;`-separated.
pub fn features_record(method: Method, cfg: &EstimatorConfig, f: &Features) -> Record {
    let mut r = Record::default();
    r.push("method", Cell::Text(method.name().to_string()));
    point_cells(&mut r, "inner_x", "inner_y", Some(f.inner));
    let d = &f.diagnostics;
    let blocks: Vec<String> = d.block_counts.iter().map(|c| c.to_string()).collect();
    r.push("centroid_x", Cell::coord(f.centroid.x))
        .push("centroid_y", Cell::coord(f.centroid.y))
        .push("area", Cell::real(f.area))
        .push("area_comparable", Cell::real(method.comparable_area_of(f, cfg)))
        .push("iterations", Cell::int(f.iterations))
        .push("converged", Cell::Bool(f.converged))
        .push("rays_cast", Cell::int(f.rays_cast))
        .push("support", Cell::int(f.support))
        .push("leak", Cell::Bool(d.leaked))
        .push("queue_pushes", Cell::int(d.queue_pushes))
        .push("calibrated_area", d.calibrated_area.map_or(Cell::Null, Cell::real))
        .push("block_counts", Cell::Text(blocks.join(";")));
    r
}

fn read_image(path: &Path) -> Result<EdgeImage, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(load_pgm(&bytes)?)
}

fn cmd_estimate(a: &EstimateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = a.config.to_config();
    cfg.validate()?;
    let image = read_image(&a.image)?;
    let inner = Point::new(a.inner.0, a.inner.1);
    let features = a.method.estimate(&image, inner, &cfg)?;
    let record = features_record(a.method, &cfg, &features);
    match a.format {
        Format::Json => emit_line(stdout, &record.to_json()?),
        Format::Csv => write_csv(stdout, &[record]),
    }
}

/// `MetricsRow` in the fixed bench column order.
pub fn metrics_record(row: &MetricsRow) -> Record {
    let mut r = Record::default();
    for (name, value) in MetricsRow::COLUMNS.iter().zip(row.values()) {
        r.push(name, Cell::Text(value));
    }
    r
}

fn cmd_bench(a: &BenchArgs) -> Result<(), CliError> {
    if a.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let text = fs::read_to_string(&a.suite).map_err(|e| CliError::io(&a.suite, e))?;
    let rows = Suite::parse(&text)?.run(a.jobs)?;
    let records: Vec<Record> = rows.iter().map(metrics_record).collect();
    let mut buf = Vec::new();
    if records.is_empty() {
        writeln!(buf, "{}", MetricsRow::COLUMNS.join(",")).expect("write to vec");
    }
    write_csv(&mut buf, &records)?;
    write_file(&a.out, &buf)
}

pub const TRACK_COLUMNS: [&str; 13] = [
    "method",
    "frame",
    "fed_inner_x",
    "fed_inner_y",
    "inside",
    "centroid_x",
    "centroid_y",
    "centroid_error",
    "area_raw",
    "iterations",
    "converged",
    "work_counter",
    "failure",
];

/// One record per simulated frame, in [`TRACK_COLUMNS`] order.
pub fn track_records(report: &TrackReport) -> Vec<Record> {
    let method = report.method;
    report
        .frames
        .iter()
        .map(|fr| {
            let mut r = Record::default();
            r.push("method", Cell::Text(method.name().to_string()))
                .push("frame", Cell::int(fr.frame));
            point_cells(&mut r, "fed_inner_x", "fed_inner_y", Some(fr.fed_inner));
            r.push("inside", Cell::Bool(fr.inside));
            match &fr.features {
                Some(f) => r
                    .push("centroid_x", Cell::coord(f.centroid.x))
                    .push("centroid_y", Cell::coord(f.centroid.y))
                    .push("centroid_error", fr.centroid_error.map_or(Cell::Null, Cell::real))
                    .push("area_raw", Cell::real(f.area))
                    .push("iterations", Cell::int(f.iterations))
                    .push("converged", Cell::Bool(f.converged))
                    .push("work_counter", Cell::int(method.work_counter(f))),
                None => {
                    for name in &TRACK_COLUMNS[5..12] {
                        r.push(name, Cell::Null);
                    }
                    &mut r
                }
            };
            r.push("failure", fr.failure.clone().map_or(Cell::Null, Cell::Text));
            r
        })
        .collect()
}

fn cmd_simulate(a: &SimulateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = a.config.to_config();
    cfg.validate()?;
    let motion = MotionSpec {
        frames: a.frames,
        velocity: a.velocity,
        scene: a.scene.to_spec(),
        noise_drop: a.noise_drop,
        master_seed: a.seed,
    };
    if let Some(dir) = &a.dump_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut dump_error = None;
    let report = simulate_with(&motion, a.method, &cfg, |t, image| {
        if let Some(dir) = &a.dump_dir {
            let path = dir.join(format!("frame{t:04}.pgm"));
            if let Err(e) = fs::write(&path, save_pgm(image)) {
                dump_error = Some(CliError::io(&path, e));
                return Err(projfeat::Error::Argument("frame dump failed".into()));
            }
        }
        Ok(())
    });
    if let Some(e) = dump_error {
        return Err(e);
    }
    let report = report?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &track_records(&report))?;
    write_file(&a.out, &buf)?;
    let mut summary = Record::default();
    summary
        .push("method", Cell::Text(report.method.name().to_string()))
        .push("frames", Cell::int(a.frames))
        .push("survival", Cell::int(report.survival));
    emit_line(stdout, &summary.to_json()?)
}
