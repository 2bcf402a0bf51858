use std::path::Path;

use beamcomb::{engine, stats};

use crate::config::ConfigFile;
use crate::error::CliError;
use crate::output::{
    self, fmt_f64, now_unix_ms, snapshot_file_name, write_json, write_snapshot_csv,
    write_sweep_csv, write_trajectory_csv, Manifest, Summary, SCHEMA_VERSION,
};

const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

fn load_and_validate(config_path: &Path) -> Result<(ConfigFile, engine::SimConfig), CliError> {
    let file = ConfigFile::load(config_path)?;
    let config = file.to_sim_config()?;
    if let Some(warning) = config.params.low_power_warning() {
        eprintln!("warning: {warning}");
    }
    Ok((file, config))
}

fn finish_manifest(
    out_dir: &Path,
    file: &ConfigFile,
    started_unix_ms: u128,
    mut outputs: Vec<String>,
) -> Result<Vec<String>, CliError> {
    outputs.push("manifest.json".to_string());
    let manifest = Manifest {
        artifact_version: ARTIFACT_VERSION,
        schema_version: SCHEMA_VERSION,
        master_seed: file.seed,
        config: file,
        started_unix_ms,
        finished_unix_ms: now_unix_ms(),
        outputs: outputs.clone(),
    };
    write_json(&out_dir.join("manifest.json"), &manifest)?;
    Ok(outputs)
}

pub fn cmd_simulate(config_path: &Path, out_dir: &Path) -> Result<(), CliError> {
    let (file, config) = load_and_validate(config_path)?;
    if config.n_slots - config.burn_in_slots < stats::MIN_USED_SLOTS {
        return Err(CliError::Config(format!(
            "summary statistics need at least {} slots after burn-in",
            stats::MIN_USED_SLOTS
        )));
    }
    let started = now_unix_ms();
    let record = engine::run_trajectory(&config)?;
    let estimate = stats::efficiency(&record, config.burn_in_slots)?;
    let summary = Summary {
        eta: estimate.eta,
        std_error: estimate.std_error,
        median_fraction: stats::median_fraction(&record, config.burn_in_slots)?,
        fraction_above_0_9: stats::fraction_above(&record, config.burn_in_slots, 0.9)?,
        click_count: record.click_count(),
        n_slots_used: estimate.n_slots_used,
        burn_in_slots: estimate.burn_in_slots,
    };

    std::fs::create_dir_all(out_dir)?;
    write_trajectory_csv(&out_dir.join("trajectory.csv"), &record)?;
    write_json(&out_dir.join("summary.json"), &summary)?;
    let outputs = finish_manifest(
        out_dir,
        &file,
        started,
        vec!["trajectory.csv".into(), "summary.json".into()],
    )?;
    output::print_done("simulate", out_dir, &outputs);
    println!(
        "eta = {}  median = {}  fraction_above_0.9 = {}  clicks = {}",
        fmt_f64(summary.eta),
        fmt_f64(summary.median_fraction),
        fmt_f64(summary.fraction_above_0_9),
        summary.click_count
    );
    Ok(())
}

pub fn cmd_sweep(
    config_path: &Path,
    d_values: &[f64],
    i0_values: &[f64],
    replicates: usize,
    out_dir: &Path,
    jobs: Option<usize>,
) -> Result<(), CliError> {
    let (file, config) = load_and_validate(config_path)?;
    if d_values.is_empty() || i0_values.is_empty() {
        return Err(CliError::Config(
            "sweep requires non-empty --D and --I0 lists".into(),
        ));
    }
    if replicates == 0 {
        return Err(CliError::Config("--replicates must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|err| CliError::Config(format!("cannot build thread pool: {err}")))?;

    let started = now_unix_ms();
    let sweep = pool.install(|| engine::run_sweep(&config, d_values, i0_values, replicates))?;

    std::fs::create_dir_all(out_dir)?;
    write_sweep_csv(&out_dir.join("sweep.csv"), &sweep, &file)?;
    let outputs = finish_manifest(out_dir, &file, started, vec!["sweep.csv".into()])?;
    output::print_done("sweep", out_dir, &outputs);
    Ok(())
}

pub fn cmd_snapshots(config_path: &Path, every: usize, out_dir: &Path) -> Result<(), CliError> {
    let (file, mut config) = load_and_validate(config_path)?;
    if every == 0 {
        return Err(CliError::Config("--every must be at least 1".into()));
    }
    config.snapshot_every = Some(every);
    let started = now_unix_ms();
    let run = engine::run_simulation(&config, None)?;

    std::fs::create_dir_all(out_dir)?;
    let mut outputs = Vec::with_capacity(run.snapshots.len());
    for snapshot in &run.snapshots {
        let name = snapshot_file_name(snapshot.slot);
        write_snapshot_csv(&out_dir.join(&name), snapshot)?;
        outputs.push(name);
    }
    // Echo the effective snapshot cadence in the manifest.
    let mut echoed = file.clone();
    echoed.snapshot_every = Some(every);
    let outputs = finish_manifest(out_dir, &echoed, started, outputs)?;
    output::print_done("snapshots", out_dir, &outputs);
    Ok(())
}
