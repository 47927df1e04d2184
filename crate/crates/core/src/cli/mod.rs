//! Command-line front end: map sweeps, dynamics, single points, self-test
//! and SVG rendering.

pub mod config;
pub mod dynamics;
pub mod render;
pub mod selftest;
pub mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::model::OscillatorParams;
use crate::observables::LogBase;
use config::{AxisSpec, FileConfig, SweepConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration `{field}`: {reason}")]
    Config { field: String, reason: String },
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("self-test failed: {0}")]
    SelftestFailed(String),
}

impl CliError {
    pub fn config(field: &str, reason: impl Into<String>) -> Self {
        CliError::Config {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 0 ok, 1 self-test failure, 2 invalid input, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::SelftestFailed(_) => 1,
            CliError::Config { .. } | CliError::Model(_) | CliError::Parse(_) => 2,
            CliError::Io { .. } | CliError::Csv(_) => 3,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io {
            path: "<stdout>".into(),
            source: e,
        }
    }
}

/// 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Parser)]
#[command(name = "meissner-lab", version, about = "Quenched coupled oscillators: stability maps, vacuum excitations and entanglement")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Boundedness of the Hamiltonian over a parameter grid.
    BoundnessMap(MapArgs),
    /// Floquet stability (Λ, S, class) over a parameter grid.
    StabilityMap(MapArgs),
    /// Time series of dilatations, excitations and entanglement.
    Dynamics(DynamicsArgs),
    /// All observables at one point and time, as JSON.
    Point(PointArgs),
    /// Run the oracle-equivalence suites.
    Selftest(SelftestArgs),
    /// Render a map CSV as an SVG heatmap.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// TOML configuration file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub j0: Option<f64>,
    #[arg(long = "omega0-sq")]
    pub omega0_sq: Option<f64>,
    /// Output file (default: standard output).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Horizontal axis as `name:min:max:count`; name is epsilon, j0, omega0_sq or omega0.
    #[arg(long)]
    pub axis1: Option<AxisSpec>,
    /// Vertical axis, same format.
    #[arg(long)]
    pub axis2: Option<AxisSpec>,
}

#[derive(Debug, Clone, Args)]
pub struct DynamicsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Time horizon (default π).
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Number of samples including both ends (default 1000).
    #[arg(long)]
    pub samples: Option<usize>,
    /// `natural` or `two`.
    #[arg(long)]
    pub log_base: Option<LogBase>,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    #[arg(long)]
    pub log_base: Option<LogBase>,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = selftest::DEFAULT_POINTS)]
    pub points: usize,
    #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
    pub seed: u64,
    /// Override a suite tolerance, e.g. `pinney-vs-rk4=1e-15`. Repeatable.
    #[arg(long = "tolerance", value_parser = parse_override)]
    pub tolerances: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    /// Map CSV produced by `boundness-map` or `stability-map`.
    pub input: PathBuf,
    /// Value column to colour by (default: class/bounded, else the first value column).
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    if !selftest::SUITES.iter().any(|(n, _)| *n == name) {
        let known: Vec<_> = selftest::SUITES.iter().map(|(n, _)| *n).collect();
        return Err(format!("unknown suite `{name}` (known: {})", known.join(", ")));
    }
    let v: f64 = value.parse().map_err(|_| format!("not a number: `{value}`"))?;
    Ok((name.to_string(), v))
}

/// Defaults, then the TOML file, then flags.
fn resolve(common: &CommonArgs, flags: FileConfig) -> Result<SweepConfig, CliError> {
    let mut cfg = SweepConfig::default();
    if let Some(path) = &common.config {
        cfg = FileConfig::load(path)?.apply(cfg);
    }
    let flags = FileConfig {
        epsilon: common.epsilon,
        j0: common.j0,
        omega0_sq: common.omega0_sq,
        output: common.output.clone(),
        ..flags
    };
    Ok(flags.apply(cfg))
}

fn point_of(cfg: &SweepConfig) -> Result<OscillatorParams, CliError> {
    let p = OscillatorParams::new(cfg.omega0_sq, cfg.epsilon, cfg.j0)?;
    p.check_admissible()?;
    Ok(p)
}

fn emit<W: Write, F>(path: Option<&Path>, stdout: &mut W, f: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(|e| CliError::io(p, e))
        }
        None => f(stdout),
    }
}

/// Executes one parsed command, writing normal output to `stdout`.
pub fn run<W: Write>(cli: Cli, stdout: &mut W) -> Result<(), CliError> {
    match cli.command {
        Command::BoundnessMap(a) => {
            let cfg = resolve(&a.common, FileConfig { axis1: a.axis1, axis2: a.axis2, ..Default::default() })?;
            let cells = sweep::boundness_map(&cfg)?;
            emit(cfg.output.as_deref(), stdout, |w| sweep::write_boundness(w, &cells))
        }
        Command::StabilityMap(a) => {
            let cfg = resolve(&a.common, FileConfig { axis1: a.axis1, axis2: a.axis2, ..Default::default() })?;
            let cells = sweep::stability_map(&cfg)?;
            emit(cfg.output.as_deref(), stdout, |w| sweep::write_stability(w, &cells))
        }
        Command::Dynamics(a) => {
            let cfg = resolve(
                &a.common,
                FileConfig {
                    horizon: a.horizon,
                    samples: a.samples,
                    log_base: a.log_base,
                    ..Default::default()
                },
            )?;
            cfg.check_dynamics()?;
            let p = point_of(&cfg)?;
            let rows = dynamics::dynamics(&p, cfg.horizon, cfg.samples, cfg.log_base)?;
            emit(cfg.output.as_deref(), stdout, |w| dynamics::write_dynamics(w, &rows))
        }
        Command::Point(a) => {
            let cfg = resolve(&a.common, FileConfig { log_base: a.log_base, ..Default::default() })?;
            let p = point_of(&cfg)?;
            let report = dynamics::point_report(&p, a.t, cfg.log_base)?;
            let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Parse(e.to_string()))?;
            emit(cfg.output.as_deref(), stdout, |w| {
                writeln!(w, "{json}")?;
                Ok(())
            })
        }
        Command::Selftest(a) => {
            if a.points == 0 {
                return Err(CliError::config("points", "must be positive"));
            }
            let results = selftest::run_all(a.seed, a.points, &a.tolerances)
                .map_err(|e| CliError::SelftestFailed(e.to_string()))?;
            for r in &results {
                writeln!(
                    stdout,
                    "{:<26} max_error={:.3e} tolerance={:.1e} points={} {}",
                    r.name,
                    r.max_error,
                    r.tolerance,
                    r.points,
                    if r.passed() { "PASS" } else { "FAIL" }
                )?;
            }
            let failed: Vec<_> = results.iter().filter(|r| !r.passed()).map(|r| r.name.as_str()).collect();
            if failed.is_empty() {
                writeln!(stdout, "all {} suites passed", results.len())?;
                Ok(())
            } else {
                Err(CliError::SelftestFailed(failed.join(", ")))
            }
        }
        Command::Render(a) => {
            let file = File::open(&a.input).map_err(|e| CliError::io(&a.input, e))?;
            let svg = render::render_svg(io::BufReader::new(file), a.column.as_deref())?;
            emit(a.output.as_deref(), stdout, |w| {
                w.write_all(svg.as_bytes())?;
                Ok(())
            })
        }
    }
}
