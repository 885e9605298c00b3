use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};

use qes_cli::config::{self, ConfigError, RunConfig};
use qes_cli::figure;
use qes_cli::record::Record;
use qes_cli::run::{self, RunOptions, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Task {
    Solve,
    Verify,
    Sweep,
    Figure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Profile {
    Default,
    Strict,
}

/// Solve, verify, sweep and plot quasi-exactly solvable curved-space
/// oscillator potentials.
#[derive(Debug, Parser)]
#[command(name = "qes", version)]
struct Args {
    /// Task to run; overrides `task` in the config.
    #[arg(long, value_enum)]
    task: Option<Task>,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid points for residuals and the finite-difference check.
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long, value_enum, default_value = "default")]
    tolerance_profile: Profile,
    /// Also report non-real root configurations.
    #[arg(long)]
    emit_complex_roots: bool,
}

fn task_of(args: &Args, cfg: &RunConfig) -> Result<Task> {
    if let Some(t) = args.task {
        return Ok(t);
    }
    match cfg.task.as_deref() {
        Some(name) => Task::from_str(name, true).map_err(|_| ConfigError::new("task", format!("unknown task {name:?}")).into()),
        None => bail!("no task given; pass --task or set task in the config"),
    }
}

fn writer(args: &Args, cfg: &RunConfig) -> Result<Box<dyn Write>> {
    let path = args.out.clone().or_else(|| cfg.out.as_ref().map(PathBuf::from));
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(&p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(args: &Args) -> Result<bool> {
    let mut cfg = config::load(&args.config)?;
    if args.grid_points.is_some() {
        cfg.grid.points = args.grid_points;
    }
    let task = task_of(args, &cfg)?;
    let opts = RunOptions {
        grid: cfg.grid.clone(),
        tolerances: match args.tolerance_profile {
            Profile::Default => Tolerances::DEFAULT,
            Profile::Strict => Tolerances::STRICT,
        },
        emit_complex: args.emit_complex_roots,
        verify: task == Task::Verify,
    };

    if task == Task::Figure {
        let fig = cfg.figure.as_ref().ok_or_else(|| ConfigError::new("figure", "missing"))?;
        let data = figure::compute(fig)?;
        figure::write_csv(&data, writer(args, &cfg)?)?;
        return Ok(true);
    }

    let spec = cfg.spec.as_ref().ok_or_else(|| ConfigError::new("spec", "missing"))?;
    spec.build("spec")?;
    run::validate_grid(spec, &cfg.grid)?;
    let records: Vec<Record> = match task {
        Task::Sweep => run::sweep(spec, &cfg.sweep, &opts)?,
        _ => run::solve_point(spec, &opts)?,
    };
    let mut out = writer(args, &cfg)?;
    for r in &records {
        writeln!(out, "{}", r.to_line())?;
    }
    out.flush()?;
    Ok(records.iter().all(Record::passed))
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification gate failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
