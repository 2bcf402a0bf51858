//! Efficiency and distributional statistics over recorded trajectories, plus
//! an ergodicity cross-check comparing time and ensemble averages.

use rayon::prelude::*;
use thiserror::Error;

use crate::circular::CircularDistribution;
use crate::engine::{self, EngineError, SimConfig, TrajectoryRecord};

/// Minimum post-burn-in slots an efficiency estimate needs.
pub const MIN_USED_SLOTS: usize = 100;
/// Batch count for the batch-means standard error. Consecutive slots are
/// strongly correlated through the filter state, so a naive i.i.d. error
/// would be far too optimistic.
pub const BATCH_COUNT: usize = 20;
/// Default bucket count for intensity histograms.
pub const DEFAULT_HISTOGRAM_BUCKETS: usize = 20;
/// Smallest ensemble the ergodicity check accepts.
pub const MIN_ENSEMBLE: usize = 30;

/// Salt separating ensemble-member seeds from sweep-cell seeds.
const ENSEMBLE_SEED_SALT: u64 = 0x0045_4e53_454d_424c;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("need at least {required} slots after burn-in, got {available}")]
    InsufficientData { required: usize, available: usize },
    #[error("histogram needs at least 2 buckets, got {0}")]
    BucketCount(usize),
    #[error("threshold must lie in [0, 1], got {0}")]
    ThresholdOutOfRange(f64),
    #[error("ergodic check needs at least {MIN_ENSEMBLE} ensemble members, got {0}")]
    EnsembleTooSmall(usize),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Time-averaged combination efficiency with a batch-means uncertainty.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EfficiencyEstimate {
    pub eta: f64,
    pub std_error: f64,
    pub n_slots_used: usize,
    pub burn_in_slots: usize,
}

fn used_fractions(
    record: &TrajectoryRecord,
    burn_in: usize,
    required: usize,
) -> Result<Vec<f64>, StatsError> {
    let available = record.len().saturating_sub(burn_in);
    if available < required {
        return Err(StatsError::InsufficientData {
            required,
            available,
        });
    }
    Ok(record.slots()[burn_in..]
        .iter()
        .map(|s| s.bright_fraction)
        .collect())
}

/// Mean bright fraction over the slots after `burn_in`, with a batch-means
/// standard error over [`BATCH_COUNT`] batches.
pub fn efficiency(
    record: &TrajectoryRecord,
    burn_in: usize,
) -> Result<EfficiencyEstimate, StatsError> {
    let values = used_fractions(record, burn_in, MIN_USED_SLOTS)?;
    let n = values.len();
    let eta = values.iter().sum::<f64>() / n as f64;

    let batch_len = n / BATCH_COUNT;
    let batch_means: Vec<f64> = (0..BATCH_COUNT)
        .map(|b| {
            let batch = &values[b * batch_len..(b + 1) * batch_len];
            batch.iter().sum::<f64>() / batch_len as f64
        })
        .collect();
    let grand = batch_means.iter().sum::<f64>() / BATCH_COUNT as f64;
    let var =
        batch_means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (BATCH_COUNT - 1) as f64;
    let std_error = (var / BATCH_COUNT as f64).sqrt();

    Ok(EfficiencyEstimate {
        eta,
        std_error,
        n_slots_used: n,
        burn_in_slots: burn_in,
    })
}

/// Histogram of bright fractions over `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntensityHistogram {
    counts: Vec<u64>,
}

impl IntensityHistogram {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n_buckets(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `[low, high)` edges of bucket `i`; the last bucket includes 1.0.
    pub fn bucket_range(&self, bucket: usize) -> (f64, f64) {
        let width = 1.0 / self.n_buckets() as f64;
        (bucket as f64 * width, (bucket + 1) as f64 * width)
    }

    /// Bucket with the most counts; ties go to the lowest bucket.
    pub fn mode_bucket(&self) -> usize {
        let mut best = 0;
        for (i, &c) in self.counts.iter().enumerate().skip(1) {
            if c > self.counts[best] {
                best = i;
            }
        }
        best
    }
}

pub fn intensity_histogram(
    record: &TrajectoryRecord,
    burn_in: usize,
    n_buckets: usize,
) -> Result<IntensityHistogram, StatsError> {
    if n_buckets < 2 {
        return Err(StatsError::BucketCount(n_buckets));
    }
    let values = used_fractions(record, burn_in, 1)?;
    let mut counts = vec![0u64; n_buckets];
    for v in values {
        let bucket = ((v * n_buckets as f64) as usize).min(n_buckets - 1);
        counts[bucket] += 1;
    }
    Ok(IntensityHistogram { counts })
}

/// Fraction of used slots whose bright fraction reaches `threshold`.
pub fn fraction_above(
    record: &TrajectoryRecord,
    burn_in: usize,
    threshold: f64,
) -> Result<f64, StatsError> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(StatsError::ThresholdOutOfRange(threshold));
    }
    let values = used_fractions(record, burn_in, 1)?;
    let hits = values.iter().filter(|&&v| v >= threshold).count();
    Ok(hits as f64 / values.len() as f64)
}

/// Median bright fraction over the used slots; an even count averages the two
/// middle values.
pub fn median_fraction(record: &TrajectoryRecord, burn_in: usize) -> Result<f64, StatsError> {
    let mut values = used_fractions(record, burn_in, 1)?;
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Ok(if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    })
}

/// Agreement report between one long time average and an ensemble of
/// independent short runs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErgodicReport {
    pub time_average: f64,
    pub ensemble_average: f64,
    pub z_score: f64,
    pub time_std_error: f64,
    pub ensemble_std_error: f64,
    pub n_ensemble: usize,
}

/// Compares the time average of one long run (driven by `config`) against the
/// mean over `n_ensemble` independent runs of `ensemble_slots` slots each.
/// Ensemble members use seeds derived from `config.seed`, the same burn-in,
/// and the configured initial-phase rule (random in the standard setup).
pub fn ergodic_check(
    config: &SimConfig,
    n_ensemble: usize,
    ensemble_slots: usize,
) -> Result<ErgodicReport, StatsError> {
    ergodic_check_with_prior(config, n_ensemble, ensemble_slots, None)
}

/// [`ergodic_check`] with an optional replacement prior for every run.
pub fn ergodic_check_with_prior(
    config: &SimConfig,
    n_ensemble: usize,
    ensemble_slots: usize,
    prior: Option<&CircularDistribution>,
) -> Result<ErgodicReport, StatsError> {
    if n_ensemble < MIN_ENSEMBLE {
        return Err(StatsError::EnsembleTooSmall(n_ensemble));
    }
    let long = engine::run_simulation(config, prior)?.record;
    let time = efficiency(&long, config.burn_in_slots)?;

    let member_etas: Result<Vec<f64>, StatsError> = (0..n_ensemble)
        .into_par_iter()
        .map(|member| {
            let member_config = SimConfig {
                n_slots: ensemble_slots,
                seed: engine::derive_seed(config.seed, &[ENSEMBLE_SEED_SALT, member as u64]),
                snapshot_every: None,
                ..*config
            };
            let record = engine::run_simulation(&member_config, prior)?.record;
            Ok(efficiency(&record, config.burn_in_slots)?.eta)
        })
        .collect();
    let member_etas = member_etas?;

    let ensemble_average = member_etas.iter().sum::<f64>() / n_ensemble as f64;
    let ensemble_var = member_etas
        .iter()
        .map(|e| (e - ensemble_average).powi(2))
        .sum::<f64>()
        / (n_ensemble - 1) as f64;
    let ensemble_std_error = (ensemble_var / n_ensemble as f64).sqrt();

    let diff = time.eta - ensemble_average;
    let denom = (time.std_error.powi(2) + ensemble_std_error.powi(2)).sqrt();
    let z_score = if diff == 0.0 { 0.0 } else { diff / denom };

    Ok(ErgodicReport {
        time_average: time.eta,
        ensemble_average,
        z_score,
        time_std_error: time.std_error,
        ensemble_std_error,
        n_ensemble,
    })
}
