//! Command-line front end: scenario files, built-in presets, CSV/JSON
//! output and run manifests.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod presets;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::config::{OutputConfig, ScenarioConfig};
use crate::error::CliError;
use crate::manifest::{write_run, RunManifest, RunOutput};

#[derive(Debug, Parser)]
#[command(name = "chiral-cp", version, about = "Casimir-Polder potentials and enantiomer separation in chiral-mirror cavities")]
pub struct Cli {
    /// Worker threads for grid and ensemble evaluation.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Potential components and the driven potential on a z grid.
    Potential(RunArgs),
    /// Resonant amplitudes at the centre against the cavity order nu.
    Enhancement(RunArgs),
    /// Trajectory ensembles and separation statistics.
    Ensemble(RunArgs),
    /// Barrier heights and threshold speeds at both mirrors.
    Barrier(RunArgs),
    /// Built-in scenarios.
    #[command(subcommand)]
    Presets(PresetsCommand),
}

#[derive(Debug, Subcommand)]
pub enum PresetsCommand {
    /// Names, commands and one-line descriptions.
    List,
    /// Print a preset's scenario file.
    Show { name: String },
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Scenario file (TOML).
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in scenario name.
    #[arg(long)]
    pub preset: Option<String>,
    /// Overrides ensemble.rng_seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory; overrides output.dir.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// The commands that compute and write an output directory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Potential,
    Enhancement,
    Ensemble,
    Barrier,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Potential => "potential",
            Task::Enhancement => "enhancement",
            Task::Ensemble => "ensemble",
            Task::Barrier => "barrier",
        }
    }
}

/// Reads the scenario and applies the command-line overrides.
pub fn load_config(args: &RunArgs, task: Task) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match (&args.config, &args.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
                field: "--config".into(),
                reason: format!("{}: {e}", path.display()),
            })?;
            ScenarioConfig::from_toml(&text)?
        }
        (None, Some(name)) => presets::load(name)?,
        (None, None) => {
            return Err(CliError::Config {
                field: "--config".into(),
                reason: "give --config or --preset".into(),
            })
        }
    };
    if let Some(seed) = args.seed {
        if let Some(e) = cfg.ensemble.as_mut() {
            e.rng_seed = seed;
        }
    }
    let dir = args
        .out
        .clone()
        .or_else(|| cfg.output.as_ref().map(|o| o.dir.clone()))
        .unwrap_or_else(|| Path::new("out").join(task.name()));
    cfg.output = Some(OutputConfig { dir });
    Ok(cfg)
}

/// Runs one computing command and writes its output directory.
pub fn execute(task: Task, cfg: &ScenarioConfig, workers: usize) -> Result<(RunManifest, String), CliError> {
    let start = Instant::now();
    let (summary, artifacts, report) = match task {
        Task::Potential => {
            let run = commands::potential(cfg)?;
            let report = run.summary.barriers.as_ref().map(|b| commands::barrier_text(b)).unwrap_or_default();
            (to_json(&run.summary), run.artifacts(), report)
        }
        Task::Enhancement => {
            let s = commands::enhancement(cfg)?;
            (to_json(&s), s.artifacts(), String::new())
        }
        Task::Ensemble => {
            let run = commands::ensemble(cfg)?;
            let report = run
                .summary
                .runs
                .iter()
                .map(|s| {
                    format!(
                        "{:?}: A {} B {} in flight {} failed {}\n",
                        s.spec.enantiomer, s.count_a, s.count_b, s.count_in_flight, s.count_failed
                    )
                })
                .collect();
            (to_json(&run.summary), run.artifacts, report)
        }
        Task::Barrier => {
            let s = commands::barrier(cfg)?;
            (to_json(&s), Vec::new(), s.text())
        }
    };
    let dir = cfg.output.as_ref().map(|o| o.dir.clone()).unwrap_or_else(|| Path::new("out").join(task.name()));
    // where the output goes is not part of the scenario
    let mut echo = cfg.clone();
    echo.output = None;
    let manifest = write_run(
        &dir,
        RunOutput {
            command: task.name(),
            config_toml: &echo.to_toml(),
            seed: cfg.seed(),
            workers,
            wall_clock_s: start.elapsed().as_secs_f64(),
            summary,
            artifacts,
        },
    )?;
    Ok((manifest, report))
}

fn to_json<T: serde::Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("summaries serialize")
}

/// Everything `main` does apart from printing errors; returns stdout text.
pub fn run(cli: Cli) -> Result<String, CliError> {
    let (task, args) = match &cli.command {
        Command::Presets(PresetsCommand::List) => {
            return Ok(presets::PRESETS
                .iter()
                .map(|p| format!("{:<6} {:<12} {}\n", p.name, p.command, p.summary))
                .collect())
        }
        Command::Presets(PresetsCommand::Show { name }) => return Ok(presets::find(name)?.text.to_string()),
        Command::Potential(a) => (Task::Potential, a),
        Command::Enhancement(a) => (Task::Enhancement, a),
        Command::Ensemble(a) => (Task::Ensemble, a),
        Command::Barrier(a) => (Task::Barrier, a),
    };
    let cfg = load_config(args, task)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(CliError::Config {
                field: "--workers".into(),
                reason: "must be >= 1".into(),
            });
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Pool(e.to_string()))?;
    let workers = pool.current_num_threads();
    let (manifest, report) = pool.install(|| execute(task, &cfg, workers))?;
    let dir = cfg.output.as_ref().map(|o| o.dir.display().to_string()).unwrap_or_default();
    Ok(format!("{report}wrote {} files and {} to {dir}\n", manifest.outputs.len(), manifest::MANIFEST_FILE))
}
