//! Command-line front end: `run`, `verify` and `bench`.

mod bench;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::assembly::AssemblyError;
use crate::constitutive::{Material, MaterialError};
use crate::io::{parse_config, write_force_displacement, write_vtk, ConfigErrors, IoError, RunConfig};
use crate::mesh::{Mesh, MeshError};
use crate::solver::{RecordRow, RunOutcome, SolveError, Solver, State};

pub use bench::{count_peaks, BenchReport, Benchmark, PlateEvents, PlateSample, PlateTracker, SenbTracker, CRACKED};
pub use verify::*;

/// Environment variable that overrides the configured output directory.
pub const OUTPUT_DIR_ENV: &str = "PHASEFIELD_OUTPUT_DIR";

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_ABORTED: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

pub const CURVE_FILE: &str = "force_displacement.csv";
pub const CONFIG_FILE: &str = "config.toml";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigErrors),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{0}")]
    Verification(String),
}

#[derive(Debug, Parser)]
#[command(name = "phasefield", version, about = "Phase-field fracture solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the simulation described by a configuration file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        options: RunOptions,
    },
    /// Compare the solver against closed-form solutions.
    Verify,
    /// Run a bundled desk-scale benchmark and check its acceptance thresholds.
    Bench {
        #[arg(value_enum)]
        name: Benchmark,
        #[command(flatten)]
        options: RunOptions,
    },
}

/// Overrides applied on top of a configuration file.
#[derive(Debug, Clone, Default, Args)]
pub struct RunOptions {
    /// Assembly worker threads.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory; also settable through `PHASEFIELD_OUTPUT_DIR`.
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// Write a VTK snapshot every this many increments (0: last only).
    #[arg(long)]
    pub snapshot_stride: Option<usize>,
}

impl RunOptions {
    /// Applies the overrides; the flag beats the environment, which beats
    /// the file.
    pub fn apply(&self, config: &mut RunConfig) {
        if let Some(t) = self.threads {
            config.solver.threads = t;
        }
        if let Some(s) = self.snapshot_stride {
            config.output.snapshot_stride = s;
        }
        let env = std::env::var_os(OUTPUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
        if let Some(dir) = self.output_dir.clone().or(env) {
            config.output.directory = dir;
        }
    }
}

/// Files written by a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    pub outcome: RunOutcome,
    pub directory: PathBuf,
    pub curve: PathBuf,
    pub snapshots: Vec<PathBuf>,
}

fn snapshot_path(dir: &Path, increment: usize) -> PathBuf {
    dir.join(format!("snapshot_{increment:04}.vtk"))
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| IoError::Io { path: dir.to_owned(), source }.into())
}

/// Builds the mesh, runs the schedule and writes the curve, the snapshots
/// and the effective configuration. Relative mesh paths resolve against
/// `base`. `observer` sees every increment.
pub fn execute(
    config: &RunConfig,
    base: &Path,
    mut observer: impl FnMut(&Mesh, &RecordRow, &State),
) -> Result<RunArtifacts, CliError> {
    let mesh = config.build_mesh(base)?;
    if !mesh.check_resolution(config.material.length_scale) {
        log::warn!("mesh is coarser than l / 2 somewhere; the crack band is under-resolved");
    }
    let material = Material::new(config.material, config.choice, mesh.regime())?;
    let mut solver = Solver::new(&mesh, material, &config.bcs, config.output.reaction.as_ref(), config.solver.clone())?;
    let dir = config.output.directory.clone();
    create_dir(&dir)?;
    crate::io::write_file(&dir.join(CONFIG_FILE), &config.to_toml())?;
    let stride = config.output.snapshot_stride;
    let mut snapshots = Vec::new();
    let mut write_error = None;
    let outcome = solver.run(|row, state| {
        log::info!(
            "increment {} applied {:.6e} reaction {:.6e} iterations {}",
            row.increment,
            row.applied,
            row.reaction,
            row.iterations
        );
        observer(&mesh, row, state);
        if stride > 0 && row.increment % stride == 0 && write_error.is_none() {
            let path = snapshot_path(&dir, row.increment);
            match write_vtk(&mesh, state, &path) {
                Ok(()) => snapshots.push(path),
                Err(e) => write_error = Some(e),
            }
        }
    })?;
    if let Some(e) = write_error {
        return Err(e.into());
    }
    let last = snapshot_path(&dir, outcome.state.increment);
    if snapshots.last() != Some(&last) {
        write_vtk(&mesh, &outcome.state, &last)?;
        snapshots.push(last);
    }
    let curve = dir.join(CURVE_FILE);
    write_force_displacement(&outcome.record, &curve)?;
    Ok(RunArtifacts { outcome, directory: dir, curve, snapshots })
}

/// `phasefield run`: exit code per the run's outcome.
pub fn run_command(path: &Path, options: &RunOptions) -> i32 {
    let mut config = match parse_config(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_ERROR;
        }
    };
    options.apply(&mut config);
    let base = path.parent().unwrap_or(Path::new("."));
    match execute(&config, base, |_, _, _| {}) {
        Ok(a) if a.outcome.aborted => {
            let k = a.outcome.record.rows.len();
            eprintln!("{}: increment {k} did not converge; partial results in {}", path.display(), a.directory.display());
            EXIT_ABORTED
        }
        Ok(_) => EXIT_SUCCESS,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            EXIT_ERROR
        }
    }
}

fn print_checks(out: &mut impl Write, checks: &[Check]) -> bool {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{verdict}  {:width$}  {}", c.name, c.detail);
    }
    checks.iter().all(|c| c.passed)
}

/// `phasefield verify`.
pub fn verify_command() -> i32 {
    match checks() {
        Ok(c) => {
            if print_checks(&mut std::io::stdout(), &c) {
                EXIT_SUCCESS
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("verify: {e}");
            EXIT_ERROR
        }
    }
}

/// `phasefield bench <name>`.
pub fn bench_command(benchmark: Benchmark, options: &RunOptions) -> i32 {
    let report = benchmark.config().and_then(|mut config| {
        options.apply(&mut config);
        benchmark.run(&config)
    });
    match report {
        Ok(r) => {
            println!("{}: {} increments, curve in {}", benchmark.name(), r.artifacts.outcome.record.rows.len(), r.artifacts.curve.display());
            let passed = print_checks(&mut std::io::stdout(), &r.checks);
            if r.artifacts.outcome.aborted {
                EXIT_ABORTED
            } else if passed {
                EXIT_SUCCESS
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("{}: {e}", benchmark.name());
            EXIT_ERROR
        }
    }
}

/// Parses `args` and dispatches; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_SUCCESS };
        }
    };
    match cli.command {
        Command::Run { config, options } => run_command(&config, &options),
        Command::Verify => verify_command(),
        Command::Bench { name, options } => bench_command(name, &options),
    }
}
