//! `beamcomb` — simulator for feedback-controlled coherent combination of two
//! photon-starved beams.
//!
//! Subcommands:
//!   simulate   run one closed-loop trajectory, export CSV + summary
//!   sweep      grid of (D, I0, replicate) runs with time-averaged efficiency
//!   snapshots  dump the phase posterior every N slots
//!
//! All randomness comes from the seed in the config file; reruns produce
//! byte-identical data files.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "beamcomb",
    version,
    about = "Two-beam combination simulator with Bayesian phase feedback"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trajectory and write trajectory.csv, summary.json, manifest.json.
    Simulate {
        /// Path to the JSON config file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a (D, I0, replicate) grid and write sweep.csv, manifest.json.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated diffusion values, e.g. --D 0.02,0.05,0.1
        #[arg(long = "D", value_delimiter = ',', required = true)]
        d_values: Vec<f64>,
        /// Comma-separated per-beam intensities, e.g. --I0 1,2,5,10,20
        #[arg(long = "I0", value_delimiter = ',', required = true)]
        i0_values: Vec<f64>,
        /// Independent replicates per grid cell.
        #[arg(long)]
        replicates: usize,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads for the sweep; defaults to all cores.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Dump the posterior every N slots as snapshot_<slot>.csv files.
    Snapshots {
        #[arg(long)]
        config: PathBuf,
        /// Snapshot cadence in slots.
        #[arg(long)]
        every: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate { config, out } => commands::cmd_simulate(config, out),
        Command::Sweep {
            config,
            d_values,
            i0_values,
            replicates,
            out,
            jobs,
        } => commands::cmd_sweep(config, d_values, i0_values, *replicates, out, *jobs),
        Command::Snapshots { config, every, out } => commands::cmd_snapshots(config, *every, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
