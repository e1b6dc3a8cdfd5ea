use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use lambent::harness::{
    self, load_config, preset, run_evolve, run_sweep, run_validate, ExperimentConfig,
    PointDiagnostic, PRESET_NAMES,
};

/// Simulator of entanglement generation between superconducting qubits
/// coupled to a cavity through a nonadiabatically switched coupling.
#[derive(Parser)]
#[command(name = "lambent", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one evolution and emit measure time series as CSV
    Evolve(RunArgs),
    /// Run a parameter sweep and emit a long-format CSV
    Sweep(RunArgs),
    /// Compare the perturbative closed forms against the exact propagator;
    /// the exit status reflects pass/fail
    Validate(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Configuration file (TOML). Without it and without --preset, the
    /// two-qubit dissipative defaults apply.
    config: Option<PathBuf>,

    /// Use a built-in preset instead of a configuration file:
    /// 2q-perturb | 2q-dissipative | 3q-dissipative | 3q-distinct
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,

    /// Output path (default: stdout). File output also writes a
    /// `<path>.manifest.json` sidecar, and sweeps write
    /// `<path>.diagnostics.json` when points fail.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads for sweep points (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

impl RunArgs {
    fn load(&self) -> anyhow::Result<ExperimentConfig> {
        if let Some(name) = &self.preset {
            return preset(name).with_context(|| {
                format!("unknown preset '{name}' (available: {})", PRESET_NAMES.join(", "))
            });
        }
        match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                Ok(load_config(&text)?)
            }
            None => Ok(load_config("")?),
        }
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn write_manifest(out: &Option<PathBuf>, cfg: &ExperimentConfig, mode: &str) -> anyhow::Result<()> {
    if let Some(path) = out {
        let manifest = serde_json::to_string_pretty(&harness::manifest(cfg, mode))?;
        fs::write(sidecar(path, "manifest.json"), manifest + "\n")?;
    }
    Ok(())
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

fn write_diagnostics(
    out: &Option<PathBuf>,
    diagnostics: &[PointDiagnostic],
) -> anyhow::Result<()> {
    if diagnostics.is_empty() {
        return Ok(());
    }
    let entries: Vec<serde_json::Value> = diagnostics
        .iter()
        .map(|d| {
            serde_json::json!({
                "point_index": d.index,
                "param_value": d.param_value,
                "error": d.error,
            })
        })
        .collect();
    let text = serde_json::to_string_pretty(&entries)?;
    match out {
        Some(path) => fs::write(sidecar(path, "diagnostics.json"), text + "\n")?,
        None => eprintln!("{text}"),
    }
    eprintln!("warning: {} sweep point(s) failed; see diagnostics", diagnostics.len());
    Ok(())
}

fn run() -> anyhow::Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Evolve(args) => {
            let cfg = args.load()?;
            let table = run_evolve(&cfg)?;
            write_output(&args.out, &table.to_csv())?;
            write_manifest(&args.out, &cfg, "evolve")?;
            Ok(true)
        }
        Command::Sweep(args) => {
            let cfg = args.load()?;
            if cfg.sweep.is_none() {
                bail!("config has no [sweep] section (and the chosen preset defines none)");
            }
            let (grid, diagnostics) = run_sweep(&cfg, args.threads)?;
            write_output(&args.out, &grid.to_csv())?;
            write_manifest(&args.out, &cfg, "sweep")?;
            write_diagnostics(&args.out, &diagnostics)?;
            Ok(true)
        }
        Command::Validate(args) => {
            let cfg = args.load()?;
            let report = run_validate(&cfg)?;
            write_output(&args.out, &report.render())?;
            write_manifest(&args.out, &cfg, "validate")?;
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
