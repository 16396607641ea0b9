//! The `diskconf` command line.
//!
//! Every subcommand writes one JSON object to `--out` or standard output.
//! Reports carry a `manifest` field echoing the subcommand, its parameters,
//! the seed, the crate version and the wall time. `add` writes a bare
//! configuration so its output can be fed back in.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::geom::Configuration;
use crate::homotopy::{uniqueness_homotopy, HomotopyTrace, DEFAULT_FRAMES};
use crate::obstruction::{default_base, measure_coefficients, DEFAULT_LOOP_STEPS};
use crate::sections::{extend, verify_section, SectionDescriptor, SectionRegistry};
use crate::solver::{find_fixed_configuration, MapRegistry, PointMapDescriptor, SearchOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_IDENTITY_VIOLATED: i32 = 3;
pub const EXIT_COLLISION: i32 = 4;
pub const EXIT_NOT_CONVERGED: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "diskconf", version, about = "Adding points to configurations in the unit ball")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress the one-line summary on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Add a point to a configuration read from JSON.
    Add(AddArgs),
    /// Check the section contract on random configurations.
    Verify(VerifyArgs),
    /// Deform a section on two points into the midpoint section.
    Homotopy(HomotopyArgs),
    /// Measure winding coefficients of a candidate in the plane.
    Obstruct(ObstructArgs),
    /// Search for a fixed configuration of a symmetric map.
    Fixed(FixedArgs),
}

#[derive(Debug, Args, Serialize)]
struct AddArgs {
    #[arg(long)]
    section: String,
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    section: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
}

#[derive(Debug, Args, Serialize)]
struct HomotopyArgs {
    #[arg(long)]
    section: String,
    #[arg(long = "in")]
    input: PathBuf,
    /// Frames per phase.
    #[arg(long, default_value_t = DEFAULT_FRAMES)]
    frames: usize,
}

#[derive(Debug, Args, Serialize)]
struct ObstructArgs {
    #[arg(long)]
    section: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.1)]
    radius: f64,
    /// Samples per generator loop.
    #[arg(long, default_value_t = DEFAULT_LOOP_STEPS)]
    samples: usize,
}

#[derive(Debug, Args, Serialize)]
struct FixedArgs {
    #[arg(long)]
    map: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = SearchOptions::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = SearchOptions::default().restarts)]
    restarts: usize,
    #[arg(long, default_value_t = SearchOptions::default().budget)]
    budget: usize,
}

/// Provenance attached to every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub params: Value,
    pub seed: u64,
    pub version: String,
    /// The only field that differs between identical runs.
    pub wall_time_s: f64,
}

#[derive(Serialize)]
struct WithManifest<'a, T: Serialize> {
    #[serde(flatten)]
    report: &'a T,
    manifest: RunManifest,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn run(cli: &Cli) -> Result<i32, Failure> {
    let started = Instant::now();
    let manifest = |name: &str, params: Value| RunManifest {
        subcommand: name.into(),
        params,
        seed: cli.seed,
        version: env!("CARGO_PKG_VERSION").into(),
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    let sections = SectionRegistry::with_candidates();

    match &cli.command {
        Command::Add(a) => {
            let s = sections.resolve(&a.section.parse::<SectionDescriptor>()?)?;
            let c = read_configuration(&a.input)?;
            let out = extend(s.as_ref(), &c)?;
            emit(cli, &out)?;
            summary(cli, format!("added {} to {} points", out.points()[0], c.len()));
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            let s = sections.resolve(&a.section.parse::<SectionDescriptor>()?)?;
            let report = verify_section(s.as_ref(), a.n, a.m, a.samples, cli.seed)?;
            let m = manifest("verify", json!(a));
            emit(cli, &WithManifest { report: &report, manifest: m })?;
            summary(
                cli,
                format!(
                    "{}: {} samples, {} violations",
                    report.section,
                    report.samples_run,
                    report.section_property_violations + report.equivariance_violations
                ),
            );
            Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Homotopy(a) => {
            let s = sections.resolve(&a.section.parse::<SectionDescriptor>()?)?;
            let c = read_configuration(&a.input)?;
            let trace: HomotopyTrace = uniqueness_homotopy(s.as_ref(), &c, a.frames)?;
            let m = manifest("homotopy", json!(a));
            emit(cli, &WithManifest { report: &trace, manifest: m })?;
            summary(cli, format!("{} frames", trace.len()));
            Ok(EXIT_OK)
        }
        Command::Obstruct(a) => {
            let s = sections.resolve(&a.section.parse::<SectionDescriptor>()?)?;
            let base = default_base(a.n, cli.seed);
            let report = measure_coefficients(s.as_ref(), a.n, &base, a.radius, a.samples)?;
            let m = manifest("obstruct", json!(a));
            emit(cli, &WithManifest { report: &report, manifest: m })?;
            summary(
                cli,
                format!(
                    "{}: lambda {:?}, identity {}",
                    report.section,
                    report.lambda,
                    if report.identity_holds { "holds" } else { "violated" }
                ),
            );
            Ok(if report.collision_witness.is_some() {
                EXIT_COLLISION
            } else if report.identity_holds {
                EXIT_OK
            } else {
                EXIT_IDENTITY_VIOLATED
            })
        }
        Command::Fixed(a) => {
            let f = MapRegistry::with_fixtures().resolve(&a.map.parse::<PointMapDescriptor>()?)?;
            let opts = SearchOptions {
                tol: a.tol,
                restarts: a.restarts,
                budget: a.budget,
                ..SearchOptions::default()
            };
            let result = find_fixed_configuration(f.as_ref(), a.n, a.m, &opts, cli.seed)?;
            let m = manifest("fixed", json!(a));
            emit(cli, &WithManifest { report: &result, manifest: m })?;
            summary(
                cli,
                format!(
                    "residual {:e} after {} evaluations",
                    result.residual, result.evaluations
                ),
            );
            Ok(if result.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
        }
    }
}

/// Reads a configuration file, naming the file and the offending field on
/// failure.
pub fn read_configuration(path: &Path) -> Result<Configuration, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        if field == "." {
            format!("{}: {}", path.display(), e.inner())
        } else {
            format!("{}: field `{field}`: {}", path.display(), e.inner())
        }
    })
}

fn emit<T: Serialize>(cli: &Cli, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn summary(cli: &Cli, line: String) {
    if !cli.quiet {
        eprintln!("{line}");
    }
}
