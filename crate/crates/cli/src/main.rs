use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand as ClapSubcommand, ValueEnum};

use becphonon_cli::config::{parse_config, Formats, DEFAULT_CONFIG};
use becphonon_cli::scenario::{run_scenario, RunOptions, ScenarioError, Subcommand};

/// Phonon-detection simulator for Bose-Einstein condensates: doubly
/// detuned Raman transfer of single phonons into countable atoms, plus
/// acoustic analogue-gravity estimators.
#[derive(Parser)]
#[command(name = "becphonon", version, about)]
struct Cli {
    /// Scenario configuration file (key = value under [section] headers).
    /// Omitted: built-in defaults (1 mm/s sound speed, 1 um healing
    /// length, 10 MHz beams detuned by 10 THz addressing a 100 Hz phonon).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides [output] directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for sweeps; 0 picks the machine default.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Which data files to write (overrides [output] formats).
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Both,
}

impl From<FormatArg> for Formats {
    fn from(f: FormatArg) -> Formats {
        match f {
            FormatArg::Csv => Formats::Csv,
            FormatArg::Json => Formats::Json,
            FormatArg::Both => Formats::Both,
        }
    }
}

#[derive(ClapSubcommand)]
enum Command {
    /// Quasiparticle dispersion and (u, v) coefficients over a k grid.
    Dispersion,
    /// Exact three-level dynamics against the eliminated two-level model.
    LambdaDemo,
    /// Phonon -> atom transfer trajectory for the configured mode.
    Transfer,
    /// Fock-space swap demonstrating n phonons -> n counted atoms.
    Fock,
    /// Pulse spectrum, energy resolution and ground-state leakage.
    PulseSpectrum,
    /// Quasiparticle mode functions along a coupling ramp.
    Ramp,
    /// Created quasiparticles per mode for a sound-speed change.
    Creation,
    /// Sonic horizons and Hawking temperatures of a demonstration flow.
    Hawking,
    /// The full feasibility chain with pass/fail checks.
    Feasibility,
    /// Parameter sweep ([scan] section; defaults to a lineshape scan).
    Sweep,
}

impl Command {
    fn subcommand(&self) -> Subcommand {
        match self {
            Command::Dispersion => Subcommand::Dispersion,
            Command::LambdaDemo => Subcommand::LambdaDemo,
            Command::Transfer => Subcommand::Transfer,
            Command::Fock => Subcommand::Fock,
            Command::PulseSpectrum => Subcommand::PulseSpectrum,
            Command::Ramp => Subcommand::Ramp,
            Command::Creation => Subcommand::Creation,
            Command::Hawking => Subcommand::Hawking,
            Command::Feasibility => Subcommand::Feasibility,
            Command::Sweep => Subcommand::Sweep,
        }
    }
}

fn run(cli: Cli) -> Result<bool, ScenarioError> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.clone(),
            source,
        })?,
        None => DEFAULT_CONFIG.to_string(),
    };
    let config = parse_config(&text).map_err(ScenarioError::Config)?;
    let scenario = config.resolve()?;

    let opts = RunOptions {
        out_dir: cli
            .out
            .unwrap_or_else(|| PathBuf::from(&scenario.output.directory)),
        formats: cli.format.map(Formats::from).unwrap_or(scenario.output.formats),
        workers: cli.workers,
    };
    let outcome = run_scenario(&scenario, cli.command.subcommand(), &opts)?;
    for line in &outcome.report {
        println!("{line}");
    }
    for file in &outcome.files {
        println!("wrote {}", file.display());
    }
    Ok(outcome.all_checks_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
