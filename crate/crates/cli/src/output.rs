//! Bit-stable file writers. Every float in a CSV is printed with 17
//! significant digits so re-ingestion reproduces the exact f64, and a rerun
//! of the same config produces byte-identical data files.

use std::fs;
use std::io::Write;
use std::path::Path;

use beamcomb::{PosteriorSnapshot, SweepResult, TrajectoryRecord};
use serde::Serialize;

use crate::config::ConfigFile;
use crate::error::CliError;

/// Version stamp for the CSV schemas listed in the manifest.
pub const SCHEMA_VERSION: u32 = 1;

/// Full round-trip decimal form of an f64 (17 significant digits).
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

pub fn write_trajectory_csv(path: &Path, record: &TrajectoryRecord) -> Result<(), CliError> {
    let mut out = String::with_capacity(record.len() * 64 + 64);
    out.push_str("slot,true_phase,correction,clicked,bright_fraction\n");
    for (slot, rec) in record.slots().iter().enumerate() {
        out.push_str(&format!(
            "{slot},{},{},{},{}\n",
            fmt_f64(rec.true_phase.radians()),
            fmt_f64(rec.correction.radians()),
            rec.clicked as u8,
            fmt_f64(rec.bright_fraction),
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_sweep_csv(
    path: &Path,
    sweep: &SweepResult,
    base: &ConfigFile,
) -> Result<(), CliError> {
    let mut out = String::new();
    out.push_str("D,I0,replicate,seed,eta,std_error,n_slots,burn_in\n");
    for cell in &sweep.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_f64(cell.diffusion),
            fmt_f64(cell.intensity_per_beam),
            cell.replicate,
            cell.seed,
            fmt_f64(cell.estimate.eta),
            fmt_f64(cell.estimate.std_error),
            base.n_slots,
            base.burn_in_slots,
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn snapshot_file_name(slot: usize) -> String {
    format!("snapshot_{slot:08}.csv")
}

pub fn write_snapshot_csv(path: &Path, snapshot: &PosteriorSnapshot) -> Result<(), CliError> {
    let mut out = String::with_capacity(snapshot.pairs.len() * 48 + 32);
    out.push_str("bin_center_phase,weight\n");
    for (phase, weight) in &snapshot.pairs {
        out.push_str(&format!(
            "{},{}\n",
            fmt_f64(phase.radians()),
            fmt_f64(*weight)
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub eta: f64,
    pub std_error: f64,
    pub median_fraction: f64,
    pub fraction_above_0_9: f64,
    pub click_count: usize,
    pub n_slots_used: usize,
    pub burn_in_slots: usize,
}

/// Reproducibility record: echoes the config (round-trips to an identical
/// simulation config), stamps versions and the master seed, and lists every
/// file the command wrote. The wall-clock times are provenance and are the
/// one part of the output set that differs between reruns.
#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub artifact_version: &'static str,
    pub schema_version: u32,
    pub master_seed: u64,
    pub config: &'a ConfigFile,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub outputs: Vec<String>,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|err| CliError::Config(format!("serialization failed: {err}")))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn now_unix_ms() -> u128 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

/// Stdout is reserved for the per-command result lines; keep them terse.
pub fn print_done(label: &str, out_dir: &Path, files: &[String]) {
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(
        stdout,
        "{label}: wrote {} file(s) to {}",
        files.len(),
        out_dir.display()
    );
}
