//! Shared fixtures for the criterion benches.

use beamcomb::{CircularDistribution, InitialPhase, SimConfig, SystemParams, DEFAULT_N_BINS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn reference_params() -> SystemParams {
    SystemParams::new(10.0, 0.05, 0.01).unwrap()
}

pub fn reference_config(n_slots: usize) -> SimConfig {
    SimConfig {
        params: reference_params(),
        n_slots,
        n_bins: DEFAULT_N_BINS,
        seed: 42,
        initial_phase: InitialPhase::Random,
        burn_in_slots: 0,
        snapshot_every: None,
    }
}

pub fn random_distribution(n_bins: usize, seed: u64) -> CircularDistribution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..n_bins).map(|_| rng.random::<f64>() + 1e-9).collect();
    CircularDistribution::from_weights(weights).unwrap()
}
