//! `bogoent`: sweeps, expanding-universe tables and coefficient-file tools.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// Classifies a library error by whether the input or the numerics failed.
    pub fn from_core(e: bogoent::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<bogoent::Error> for CliError {
    fn from(e: bogoent::Error) -> Self {
        CliError::from_core(e)
    }
}

#[derive(Parser)]
#[command(name = "bogoent", version, about = "Entanglement generated by Bogoliubov transformations")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a single acceleration segment of a cavity over u.
    Cavity {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the cutoff in the configuration.
        #[arg(long)]
        cutoff: Option<usize>,
    },
    /// Pair creation in the expanding universe over a k grid.
    Frw {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a coefficient file to a squeezed product state.
    Apply {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Bogoliubov identity residuals of a coefficient file.
    Check { file: PathBuf },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::config("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config(e.to_string()))?;
    }
    match cli.command {
        Command::Cavity { config, out, cutoff } => {
            let text = commands::cavity(&config::load(&config)?, cutoff)?;
            emit(&text, out.as_ref())
        }
        Command::Frw { config, out } => emit(&commands::frw(&config::load(&config)?)?, out.as_ref()),
        Command::Apply { config, out } => emit(&commands::apply(&config::load(&config)?)?, out.as_ref()),
        Command::Check { file } => emit(&commands::check(&file)?, None),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bogoent: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
