//! Command-line front end: runs scenario analyses from a JSON configuration
//! or a named preset, writing CSV results plus JSON metadata.
//!
//! Subcommands are non-interactive; the only stdout output is one
//! machine-readable JSON summary line. Exit status: 0 on success, 2 for
//! usage/configuration problems, 1 for computational failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quasi1d::scenario::{expand_preset, preset_catalog, run_scenario, RunReport, ScenarioConfig};
use quasi1d::{Error, Result};

#[derive(Parser)]
#[command(
    name = "quasi1d",
    version,
    about = "Collective atom-light response in quasi-1D photonic reservoirs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transmission and reflection spectra
    Spectrum(RunArgs),
    /// Collective mode shift/rate tables
    Modes(RunArgs),
    /// Single-excitation time evolution
    Dynamics(RunArgs),
    /// EIT transmission and polaritonic dispersion
    Eit(RunArgs),
    /// Green's function map over a position grid
    Greens(GreensArgs),
    /// List the preset catalog
    Presets,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario configuration file (JSON)
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named preset from the catalog
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Output directory (default: $QUASI1D_OUT, else the working directory)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Override a configuration value by dotted path, e.g.
    /// --set chain.gamma_prime=0.5 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Cap the worker thread count
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Args)]
struct GreensArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Override the evaluation frequency of a layered-stack model
    #[arg(long, value_name = "OMEGA")]
    omega: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum AnalysisKind {
    Spectrum,
    Modes,
    Dynamics,
    Eit,
    Greens,
}

impl AnalysisKind {
    fn name(self) -> &'static str {
        match self {
            AnalysisKind::Spectrum => "spectrum",
            AnalysisKind::Modes => "modes",
            AnalysisKind::Dynamics => "dynamics",
            AnalysisKind::Eit => "eit",
            AnalysisKind::Greens => "greens_map",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Presets => {
            let catalog = preset_catalog();
            println!("{}", serde_json::to_string(&catalog)?);
            Ok(())
        }
        Command::Spectrum(args) => run(args, AnalysisKind::Spectrum, None),
        Command::Modes(args) => run(args, AnalysisKind::Modes, None),
        Command::Dynamics(args) => run(args, AnalysisKind::Dynamics, None),
        Command::Eit(args) => run(args, AnalysisKind::Eit, None),
        Command::Greens(args) => run(args.run, AnalysisKind::Greens, args.omega),
    }
}

fn run(args: RunArgs, kind: AnalysisKind, omega: Option<f64>) -> Result<()> {
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(Error::config("--threads", "must be >= 1"));
        }
        // best effort: a later call cannot rebuild an existing global pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let overrides = parse_overrides(&args.set)?;
    let runs = collect_runs(&args, &overrides)?;
    let out_dir = args
        .out
        .or_else(|| std::env::var_os("QUASI1D_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    let mut reports: Vec<RunReport> = Vec::new();
    for (label, config) in runs {
        let selected = select_analysis(&config, kind, omega, &label)?;
        reports.push(run_scenario(&selected, &out_dir, &label)?);
    }

    let summary = serde_json::json!({
        "status": "ok",
        "analysis": kind.name(),
        "out_dir": out_dir.display().to_string(),
        "runs": reports.iter().map(|r| serde_json::json!({
            "label": r.label,
            "config_hash": r.config_hash,
            "outputs": r.outputs.iter()
                .filter_map(|p| p.file_name().map(|s| s.to_string_lossy().into_owned()))
                .collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    println!("{summary}");
    Ok(())
}

fn parse_overrides(raw: &[String]) -> Result<Vec<(String, String)>> {
    raw.iter()
        .map(|s| {
            s.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::config("--set", format!("expected KEY=VALUE, got `{s}`")))
        })
        .collect()
}

fn collect_runs(
    args: &RunArgs,
    overrides: &[(String, String)],
) -> Result<Vec<(String, ScenarioConfig)>> {
    match (&args.config, &args.preset) {
        (Some(path), None) => {
            let document = std::fs::read_to_string(path)
                .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
            let config = ScenarioConfig::load(&document, overrides)?;
            let label = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "run".into());
            Ok(vec![(label, config)])
        }
        (None, Some(name)) => expand_preset(name)?
            .into_iter()
            .map(|(label, config)| {
                let reloaded = ScenarioConfig::load(&config.canonical_json(), overrides)?;
                Ok((label, reloaded))
            })
            .collect(),
        _ => Err(Error::config(
            "--config/--preset",
            "exactly one of --config or --preset is required",
        )),
    }
}

/// Keep only the analysis matching the subcommand; other analyses in the
/// document are ignored by that subcommand.
fn select_analysis(
    config: &ScenarioConfig,
    kind: AnalysisKind,
    omega: Option<f64>,
    label: &str,
) -> Result<ScenarioConfig> {
    let mut selected = config.clone();
    let a = &mut selected.analyses;
    let present = match kind {
        AnalysisKind::Spectrum => a.spectrum.is_some() || a.nonmarkov.is_some(),
        AnalysisKind::Modes => a.modes.is_some(),
        AnalysisKind::Dynamics => a.dynamics.is_some(),
        AnalysisKind::Eit => a.eit.is_some(),
        AnalysisKind::Greens => a.greens_map.is_some(),
    };
    if !present {
        return Err(Error::config(
            format!("analyses.{}", kind.name()),
            format!("run `{label}` does not request this analysis"),
        ));
    }
    a.spectrum = a.spectrum.take().filter(|_| kind == AnalysisKind::Spectrum);
    a.modes = a.modes.take().filter(|_| kind == AnalysisKind::Modes);
    a.dynamics = a.dynamics.take().filter(|_| kind == AnalysisKind::Dynamics);
    a.eit = a.eit.take().filter(|_| kind == AnalysisKind::Eit);
    a.greens_map = a.greens_map.take().filter(|_| kind == AnalysisKind::Greens);
    // colored-reservoir spectra are spectrum-type outputs
    a.nonmarkov = a.nonmarkov.take().filter(|_| kind == AnalysisKind::Spectrum);
    if let (AnalysisKind::Greens, Some(omega)) = (kind, omega) {
        if let Some(map) = &mut a.greens_map {
            map.omega = Some(omega);
        }
    }
    Ok(selected)
}
