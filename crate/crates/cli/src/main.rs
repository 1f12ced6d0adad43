//! Command-line driver for the exoland library.
//!
//! Exit codes: 0 on success, 2 on input/precondition violations, 3 on
//! numerical-threshold breaches.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::CommandIo;
use config::RunConfig;

/// CLI-level error with its exit-code class.
#[derive(Debug)]
pub struct CliError {
    numerical: bool,
    message: String,
}

impl CliError {
    pub fn input(message: String) -> Self {
        CliError {
            numerical: false,
            message,
        }
    }

    pub fn numerical(message: String) -> Self {
        CliError {
            numerical: true,
            message,
        }
    }

    fn exit_code(&self) -> u8 {
        if self.numerical {
            3
        } else {
            2
        }
    }
}

impl From<exoland::Error> for CliError {
    fn from(err: exoland::Error) -> Self {
        CliError {
            numerical: err.is_numerical(),
            message: err.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "exoland",
    version,
    about = "Exotic Landau model: spectra, phase-space distributions, Wehrl entropy, diamagnetism, and KMS coherent-state checks"
)]
struct Cli {
    /// Flat key-value (TOML) run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output path (commands emitting several files use it as a prefix);
    /// stdout when omitted where applicable.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output encoding for tables and grids.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Seed for the random-point property checks.
    #[arg(long, global = true, default_value_t = 12345)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate all two-oscillator levels with E <= e_max.
    Spectrum,
    /// Q-Husimi and P grids plus their normalization report.
    Distributions,
    /// Wehrl entropy: closed form vs quadrature, with per-mode factors.
    Wehrl,
    /// Sweep kappa: free energy, magnetization, susceptibility, residuals.
    MagnetSweep,
    /// Hilbert-Schmidt/KMS diagnostics: tails, unitarity, isometry,
    /// resolution of identity, Husimi normalization.
    KmsCheck,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let config_path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::input("--config <PATH> is required".into()))?;
    let config = RunConfig::load(config_path)?;
    let io = CommandIo {
        out: cli.out.as_deref(),
        format: cli.format,
        seed: cli.seed,
    };
    match cli.command {
        Command::Spectrum => commands::cmd_spectrum(&config, &io),
        Command::Distributions => commands::cmd_distributions(&config, &io),
        Command::Wehrl => commands::cmd_wehrl(&config, &io),
        Command::MagnetSweep => commands::cmd_magnet_sweep(&config, &io),
        Command::KmsCheck => commands::cmd_kms_check(&config, &io),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.exit_code())
        }
    }
}
