//! Command-line front end: preset files, SNR sweeps and CSV output.

pub mod csv;
pub mod preset;
pub mod sweep;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::exec::Execution;
use crate::secrecy::{db_to_linear, optimal_transmit_power, sop_exact, sop_saturation, Contours, SecrecyError};
use crate::specfn::ContourSpec;

pub use csv::{emit_csv, parse_csv, to_csv_string};
pub use preset::{resolve, FigurePreset, LoadedPreset, PRESET_DIR_ENV};
pub use sweep::{run_sweep, Flag, Grid, Method, SweepAxis, SweepResult, SweepRow, SweepSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv error: {0}")]
    Csv(String),
    #[error(transparent)]
    Secrecy(#[from] SecrecyError),
}

impl CliError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rfuwoc",
    version,
    about = "Secrecy outage of mixed RF/underwater-optical DF relaying"
)]
pub struct Cli {
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a preset over its SNR grid and write CSV.
    Sweep {
        /// Preset name (looked up in the preset directories) or file path.
        #[arg(long)]
        preset: String,
        /// Comma-separated subset of exact,asymptotic,saturation,oracle,mc.
        #[arg(long)]
        methods: Option<String>,
        /// Monte Carlo trials per grid point.
        #[arg(long)]
        trials: Option<u64>,
        /// Monte Carlo master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file. With several curves, one file per curve is written as
        /// `<stem>_<curve>.csv`. Without it a single curve goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Only run the curve with this label.
        #[arg(long)]
        curve: Option<String>,
        /// Exit with status 1 if any method failed at any point.
        #[arg(long)]
        strict: bool,
    },
    /// Parse and check a preset file without evaluating anything.
    Validate {
        #[arg(long)]
        preset: PathBuf,
    },
    /// Smallest main-link SNR on the preset grid within `eps` of the SOP floor.
    OptimalPower {
        #[arg(long)]
        preset: String,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long)]
        curve: Option<String>,
    },
}

/// Outcome of a successful command: exit status 0 or 1 (strict failures).
pub fn run(cli: Cli) -> Result<i32, CliError> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Sweep {
            preset,
            methods,
            trials,
            seed,
            out,
            curve,
            strict,
        } => {
            let loaded = LoadedPreset::load(&resolve(&preset)?)?;
            let mut specs = select(loaded.specs()?, curve.as_deref())?;
            let methods = methods.as_deref().map(sweep::parse_methods).transpose()?;
            for spec in &mut specs {
                if let Some(m) = &methods {
                    spec.methods = m.clone();
                }
                if spec.methods.contains(&Method::Mc) {
                    let mut mc = spec.mc.unwrap_or_else(|| loaded.preset.mc_config());
                    mc.trials = trials.unwrap_or(mc.trials);
                    mc.master_seed = seed.unwrap_or(mc.master_seed);
                    spec.mc = Some(mc);
                } else {
                    spec.mc = None;
                }
                spec.validate()?;
            }
            let targets = output_targets(&specs, out.as_deref())?;
            let mut failed = false;
            for (spec, target) in specs.iter().zip(targets) {
                let result = run_sweep(spec, exec)?;
                failed |= result.has_failures();
                match target {
                    Some(path) => {
                        emit_csv(&result, &path)?;
                        eprintln!("{} -> {}", spec.label, path.display());
                    }
                    None => {
                        let mut stdout = std::io::stdout().lock();
                        stdout
                            .write_all(to_csv_string(&result).as_bytes())
                            .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
                    }
                }
            }
            Ok(if strict && failed { 1 } else { 0 })
        }
        Command::Validate { preset } => {
            let loaded = LoadedPreset::load(&preset)?;
            let specs = loaded.specs()?;
            println!(
                "{}: ok ({} curves, {} grid points)",
                preset.display(),
                specs.len(),
                loaded.preset.grid.points().len()
            );
            Ok(0)
        }
        Command::OptimalPower { preset, eps, curve } => {
            let loaded = LoadedPreset::load(&resolve(&preset)?)?;
            let specs = select(loaded.specs()?, curve.as_deref())?;
            println!("curve,optimal_db,sop_exact,sop_saturation");
            for spec in specs {
                if spec.axis != SweepAxis::MainSnrDb {
                    return Err(CliError::Config("axis: optimal-power needs a main_snr_db sweep".into()));
                }
                let grid = spec.grid.points();
                let db = optimal_transmit_power(&spec.scenario, eps, &grid)?;
                let at = spec.scenario.with_main_snr(db_to_linear(db))?;
                let exact = sop_exact(&at, &Contours::default())?.value;
                let floor = sop_saturation(&at, &ContourSpec::univariate())?.value;
                println!("{:?},{db},{exact},{floor}", spec.label);
            }
            Ok(0)
        }
    }
}

fn select(specs: Vec<SweepSpec>, curve: Option<&str>) -> Result<Vec<SweepSpec>, CliError> {
    match curve {
        None => Ok(specs),
        Some(label) => {
            let picked: Vec<SweepSpec> = specs.into_iter().filter(|s| s.label == label).collect();
            if picked.is_empty() {
                Err(CliError::Config(format!("curve: no curve labelled {label:?}")))
            } else {
                Ok(picked)
            }
        }
    }
}

/// Filesystem-friendly form of a curve label.
pub fn slug(label: &str) -> String {
    let mut out = String::new();
    for ch in label.chars() {
        if ch.is_ascii_alphanumeric() || ch == '.' || ch == '-' {
            out.push(ch);
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

fn output_targets(specs: &[SweepSpec], out: Option<&Path>) -> Result<Vec<Option<PathBuf>>, CliError> {
    match (out, specs.len()) {
        (None, 1) => Ok(vec![None]),
        (None, _) => Err(CliError::Config(
            "several curves selected: pass --out or --curve".into(),
        )),
        (Some(p), 1) => Ok(vec![Some(p.to_path_buf())]),
        (Some(p), _) => {
            let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
            let dir = p.parent().unwrap_or(Path::new(""));
            Ok(specs
                .iter()
                .map(|s| Some(dir.join(format!("{stem}_{}.csv", slug(&s.label)))))
                .collect())
        }
    }
}
