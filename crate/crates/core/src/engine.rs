//! Closed-loop simulation driver: evolve the true phase, sample dark-port
//! detection, run the filter, apply its correction, and record everything.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::circular::{CircularDistribution, CircularError, Phase, MIN_BINS};
use crate::estimator::{BayesFilter, FilterError};
use crate::physics::{self, ParamsError, SystemParams};
use crate::stats::{self, EfficiencyEstimate};

/// Default grid resolution; fine enough that the bin width sits well below
/// the diffusion kernel widths this simulator targets.
pub const DEFAULT_N_BINS: usize = 1024;

/// Deterministic RNG driving a single trajectory; the seed is recorded in all
/// outputs so any run can be reproduced bit for bit.
pub type TrajectoryRng = ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Circular(#[from] CircularError),
    #[error(transparent)]
    Filter(#[from] FilterError),
}

/// Starting value of the true relative phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialPhase {
    Fixed(Phase),
    /// Drawn uniformly from the whole interval at slot 0.
    Random,
}

/// Full description of one simulation run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub params: SystemParams,
    pub n_slots: usize,
    pub n_bins: usize,
    pub seed: u64,
    pub initial_phase: InitialPhase,
    pub burn_in_slots: usize,
    pub snapshot_every: Option<usize>,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.n_slots < 1 {
            return Err(EngineError::Config("n_slots must be at least 1".into()));
        }
        if self.burn_in_slots >= self.n_slots {
            return Err(EngineError::Config(format!(
                "burn_in_slots ({}) must be smaller than n_slots ({})",
                self.burn_in_slots, self.n_slots
            )));
        }
        if self.n_bins < MIN_BINS {
            return Err(EngineError::Config(format!(
                "n_bins must be at least {MIN_BINS}, got {}",
                self.n_bins
            )));
        }
        if self.snapshot_every == Some(0) {
            return Err(EngineError::Config(
                "snapshot_every must be positive when set".into(),
            ));
        }
        Ok(())
    }
}

/// Everything recorded about one slot. `correction` is the control phase held
/// *during* the slot, i.e. the filter output computed from the clicks of all
/// earlier slots. `bright_fraction` is the analytic `(1 + cos(err)) / 2`, not
/// a sampled count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlotRecord {
    pub true_phase: Phase,
    pub correction: Phase,
    pub clicked: bool,
    pub bright_fraction: f64,
}

impl SlotRecord {
    /// Complement of the bright fraction; the two sum to 1 exactly.
    pub fn dark_fraction(&self) -> f64 {
        1.0 - self.bright_fraction
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    slots: Vec<SlotRecord>,
}

impl TrajectoryRecord {
    pub fn from_slots(slots: Vec<SlotRecord>) -> Self {
        Self { slots }
    }

    pub fn slots(&self) -> &[SlotRecord] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn click_count(&self) -> usize {
        self.slots.iter().filter(|s| s.clicked).count()
    }
}

/// Posterior dump taken after the filter processed the named slot.
#[derive(Clone, Debug, PartialEq)]
pub struct PosteriorSnapshot {
    pub slot: usize,
    pub pairs: Vec<(Phase, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimOutput {
    pub record: TrajectoryRecord,
    /// One snapshot per `snapshot_every` processed slots; empty when the
    /// config does not ask for snapshots.
    pub snapshots: Vec<PosteriorSnapshot>,
}

/// Runs one closed-loop trajectory. Deterministic given the config.
pub fn run_trajectory(config: &SimConfig) -> Result<TrajectoryRecord, EngineError> {
    Ok(run_simulation(config, None)?.record)
}

/// [`run_trajectory`] with an optional replacement prior, used by tests and
/// calibration runs that start the filter away from the uniform prior.
pub fn run_simulation(
    config: &SimConfig,
    prior: Option<&CircularDistribution>,
) -> Result<SimOutput, EngineError> {
    config.validate()?;
    let params = config.params;
    let mut rng = TrajectoryRng::seed_from_u64(config.seed);
    let mut filter = BayesFilter::new(params, config.n_bins)?;
    if let Some(prior) = prior {
        filter.replace_posterior(prior.clone())?;
    }
    let mut true_phase = match config.initial_phase {
        InitialPhase::Fixed(phase) => phase,
        InitialPhase::Random => random_phase(&mut rng),
    };
    let mut slots = Vec::with_capacity(config.n_slots);
    let mut snapshots = Vec::new();
    for slot in 0..config.n_slots {
        // Slot 0 uses the initial phase directly; later slots diffuse first.
        if slot > 0 {
            true_phase = physics::diffuse_phase(true_phase, &params, &mut rng);
        }
        let correction = filter.correction();
        let error = true_phase.difference(correction);
        let outcome = physics::sample_click(&params, error, &mut rng);
        let bright_fraction = (1.0 + error.radians().cos()) / 2.0;
        filter.step(outcome)?;
        slots.push(SlotRecord {
            true_phase,
            correction,
            clicked: outcome.clicked,
            bright_fraction,
        });
        if let Some(every) = config.snapshot_every {
            if (slot + 1) % every == 0 {
                snapshots.push(PosteriorSnapshot {
                    slot,
                    pairs: filter.posterior_pairs(),
                });
            }
        }
    }
    Ok(SimOutput {
        record: TrajectoryRecord::from_slots(slots),
        snapshots,
    })
}

/// Uniform draw over `(-pi, pi]` consuming one variate.
fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Phase {
    let u: f64 = rng.random();
    crate::circular::wrap_phase(std::f64::consts::PI - u * std::f64::consts::TAU)
        .expect("finite by construction")
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent per-cell seed from the master seed and a list of
/// cell coordinates by chaining a splitmix64 finalizer. Depends only on the
/// coordinate values, never on execution order.
pub fn derive_seed(master: u64, coordinates: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &c in coordinates {
        state = splitmix64(state ^ c);
    }
    state
}

/// One `(D, I0, replicate)` cell of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub d_index: usize,
    pub i0_index: usize,
    pub replicate: usize,
    pub diffusion: f64,
    pub intensity_per_beam: f64,
    pub seed: u64,
    pub estimate: EfficiencyEstimate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub d_values: Vec<f64>,
    pub i0_values: Vec<f64>,
    pub replicates: usize,
    /// Ordered by `(d_index, i0_index, replicate)`.
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    pub fn cell(&self, d_index: usize, i0_index: usize, replicate: usize) -> &SweepCell {
        let per_d = self.i0_values.len() * self.replicates;
        &self.cells[d_index * per_d + i0_index * self.replicates + replicate]
    }
}

/// Runs the full `(D, I0, replicate)` grid. Cells are independent, carry
/// seeds derived from their coordinates alone, and may run in parallel.
pub fn run_sweep(
    base: &SimConfig,
    d_values: &[f64],
    i0_values: &[f64],
    replicates: usize,
) -> Result<SweepResult, EngineError> {
    base.validate()?;
    if d_values.is_empty() || i0_values.is_empty() {
        return Err(EngineError::Config(
            "sweep requires at least one D and one I0 value".into(),
        ));
    }
    if replicates == 0 {
        return Err(EngineError::Config(
            "sweep requires at least one replicate".into(),
        ));
    }
    if base.n_slots - base.burn_in_slots < stats::MIN_USED_SLOTS {
        return Err(EngineError::Config(format!(
            "sweep needs at least {} slots after burn-in",
            stats::MIN_USED_SLOTS
        )));
    }

    let mut coords = Vec::with_capacity(d_values.len() * i0_values.len() * replicates);
    for d_index in 0..d_values.len() {
        for i0_index in 0..i0_values.len() {
            for replicate in 0..replicates {
                coords.push((d_index, i0_index, replicate));
            }
        }
    }
    let cells: Result<Vec<SweepCell>, EngineError> = coords
        .par_iter()
        .map(|&(d_index, i0_index, replicate)| {
            let params = SystemParams::new(
                i0_values[i0_index],
                d_values[d_index],
                base.params.slot_duration(),
            )?;
            let seed = derive_seed(
                base.seed,
                &[d_index as u64, i0_index as u64, replicate as u64],
            );
            let config = SimConfig {
                params,
                seed,
                snapshot_every: None,
                ..*base
            };
            let record = run_trajectory(&config)?;
            let estimate = stats::efficiency(&record, base.burn_in_slots)
                .expect("slot budget validated above");
            Ok(SweepCell {
                d_index,
                i0_index,
                replicate,
                diffusion: d_values[d_index],
                intensity_per_beam: i0_values[i0_index],
                seed,
                estimate,
            })
        })
        .collect();
    Ok(SweepResult {
        d_values: d_values.to_vec(),
        i0_values: i0_values.to_vec(),
        replicates,
        cells: cells?,
    })
}
