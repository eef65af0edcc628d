mod commands;
mod error;
mod matrix;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::RunArgs;
use crate::error::{CliError, Result};

/// Quaternionic numerical ranges of complex matrices.
#[derive(Debug, Parser)]
#[command(name = "qbild", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the upper bild and write JSON, CSV and SVG output.
    Bild {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Sweep the complex numerical range and print its radius enclosure.
    Crange {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check a bild against random quaternionic samples.
    Validate {
        input: PathBuf,
        /// Previously computed bild.json to check instead of recomputing.
        #[arg(long)]
        bild: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Reproduce the square and radius counterexamples.
    Demos {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Estimate the real band of the bild.
    Band {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Sample the quaternionic numerical range of a (possibly quaternionic) matrix.
    Sample {
        input: PathBuf,
        /// Maximum rows in sample.csv.
        #[arg(long, default_value_t = 10_000)]
        rows: usize,
        #[command(flatten)]
        run: RunArgs,
    },
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("QBILD_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Config(format!("QBILD_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match &cli.command {
        Command::Bild { input, run } => {
            run.check()?;
            commands::bild(input, run)
        }
        Command::Crange { input, run } => {
            run.check()?;
            commands::crange(input, run)
        }
        Command::Validate { input, bild, run } => {
            run.check()?;
            commands::validate(input, bild.as_deref(), run)
        }
        Command::Demos { run } => {
            run.check()?;
            commands::demos(run)
        }
        Command::Band { input, run } => {
            run.check()?;
            commands::band_cmd(input, run)
        }
        Command::Sample { input, rows, run } => {
            run.check()?;
            commands::sample(input, *rows, run)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
