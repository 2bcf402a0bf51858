//! Simulation library for coherent combination of two photon-starved light
//! beams under a drifting relative phase.
//!
//! Two beams interfere on a 50:50 splitter; a Geiger-mode detector watches
//! the dark port and a feedback loop applies a phase correction derived from
//! a recursive Bayesian filter over the relative phase. The crate provides:
//!
//! - [`circular`]: discretized distributions on the circle, wrapped Gaussian
//!   kernels, circular convolution, argmax extraction;
//! - [`physics`]: port intensities, click probabilities, click sampling, and
//!   the random-walk phase model;
//! - [`estimator`]: the predict/update/correct filter cycle;
//! - [`engine`]: closed-loop trajectory runner and parameter sweeps;
//! - [`stats`]: combination-efficiency statistics and an ergodicity check.
//!
//! Every stochastic element is driven by an explicitly seeded RNG, so runs
//! are reproducible bit for bit.

pub mod circular;
pub mod engine;
pub mod estimator;
pub mod physics;
pub mod stats;

pub use circular::{
    argmax_bin, argmax_phase, circular_convolve, wrap_phase, CircularConvolver,
    CircularDistribution, CircularError, Phase,
};
pub use engine::{
    derive_seed, run_simulation, run_sweep, run_trajectory, EngineError, InitialPhase,
    PosteriorSnapshot, SimConfig, SimOutput, SlotRecord, SweepCell, SweepResult, TrajectoryRecord,
    TrajectoryRng, DEFAULT_N_BINS,
};
pub use estimator::{BayesFilter, FilterError};
pub use physics::{
    bright_intensity, dark_intensity, diffuse_phase, prob_click, prob_no_click, sample_click,
    ClickOutcome, ParamsError, SystemParams,
};
pub use stats::{
    efficiency, ergodic_check, ergodic_check_with_prior, fraction_above, intensity_histogram,
    median_fraction, EfficiencyEstimate, ErgodicReport, IntensityHistogram, StatsError,
};
