//! `trion` — scenario runner and analysis front end for the spin–photon
//! cluster-state simulator.
//!
//! Exit codes: 0 on success, 2 for configuration or input errors (with
//! field-path diagnostics on stderr), 3 for numerical failures.

mod commands;
mod config;
mod io;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Errors split by exit class.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or input data → exit code 2.
    Config(String),
    /// Numerical or IO failure during a validated run → exit code 3.
    Runtime(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "trion",
    version,
    about = "Simulator and analysis toolkit for sequential spin-photon cluster-state generation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario: fidelity curve, truth tables, capture probabilities
    Simulate {
        /// Scenario config (JSON)
        #[arg(long)]
        config: PathBuf,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        /// Override the config seed recorded in the metadata
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the systematic-error sweep: per-epsilon curves plus merged band
    Sweep {
        /// Scenario config (JSON) with a `sweep` section
        #[arg(long)]
        config: PathBuf,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        /// Override the config seed recorded in the metadata
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Fit the damped-cosine polarization model to a time-series CSV
    FitDcp {
        /// Input CSV with columns time_ns,dcp[,err]
        input: PathBuf,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Fit the g-factor to frequency-vs-field points
    Gfactor {
        /// Input CSV with columns b_field_t,frequency_ghz[,err]
        input: PathBuf,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Derive fidelity bounds from a coincidence-counts CSV
    Fidelity {
        /// Input CSV with columns basis2,basis3,outcome2,outcome3,count
        input: PathBuf,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Seed of the Monte Carlo uncertainty resampling
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Monte Carlo resample count
        #[arg(long, default_value_t = 10_000)]
        mc_samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate {
            config,
            out,
            jobs,
            seed,
        } => commands::simulate(&config, &out, seed, jobs),
        Command::Sweep {
            config,
            out,
            jobs,
            seed,
        } => commands::sweep(&config, &out, seed, jobs),
        Command::FitDcp { input, out } => commands::fit_dcp_cmd(&input, &out),
        Command::Gfactor { input, out } => commands::gfactor_cmd(&input, &out),
        Command::Fidelity {
            input,
            out,
            seed,
            mc_samples,
        } => commands::fidelity_cmd(&input, &out, seed, mc_samples),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
