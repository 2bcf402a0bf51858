//! Recursive Bayesian phase filter on a circular grid.
//!
//! Each detection slot runs predict (convolve the posterior with the diffusion
//! kernel), update (multiply by the click likelihood and renormalize), and
//! correct (move the control phase to the posterior maximum). The correction
//! returned by a step is the one applied during the *next* slot.

use thiserror::Error;

use crate::circular::{argmax_bin, CircularConvolver, CircularDistribution, CircularError, Phase};
use crate::physics::{ClickOutcome, ParamsError, SystemParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FilterError {
    #[error(transparent)]
    Circular(#[from] CircularError),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error("posterior mass degenerated to zero during update")]
    Degenerate,
}

/// Grid filter holding the posterior over the relative phase, the precomputed
/// diffusion kernel, and the control phase currently applied.
#[derive(Clone, Debug)]
pub struct BayesFilter {
    params: SystemParams,
    posterior: CircularDistribution,
    kernel: Option<CircularDistribution>,
    convolver: Option<CircularConvolver>,
    /// `no_click_likelihood[d]` is the probability of seeing no click when the
    /// true phase sits `d` bins away from the correction bin. The control
    /// phase is always a bin center, so the likelihood depends only on the bin
    /// offset; tabulating it once keeps updates cheap and bit-symmetric.
    no_click_likelihood: Vec<f64>,
    correction_bin: usize,
}

impl BayesFilter {
    /// Fresh filter with a uniform prior. The initial correction is the
    /// uniform argmax, which the lowest-index tie rule puts at bin 0.
    pub fn new(params: SystemParams, n_bins: usize) -> Result<Self, FilterError> {
        let posterior = CircularDistribution::uniform(n_bins)?;
        let variance = params.increment_variance();
        // D = 0 bypasses the kernel entirely; predict is then the identity.
        let kernel = if variance > 0.0 {
            Some(CircularDistribution::wrapped_gaussian_kernel(
                n_bins, variance,
            )?)
        } else {
            None
        };
        let convolver = kernel.as_ref().map(CircularConvolver::new);
        let no_click_likelihood = no_click_table(&params, n_bins);
        let correction_bin = argmax_bin(&posterior);
        Ok(Self {
            params,
            posterior,
            kernel,
            convolver,
            no_click_likelihood,
            correction_bin,
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn n_bins(&self) -> usize {
        self.posterior.n_bins()
    }

    pub fn posterior(&self) -> &CircularDistribution {
        &self.posterior
    }

    /// Diffusion kernel, or `None` when `D = 0`.
    pub fn kernel(&self) -> Option<&CircularDistribution> {
        self.kernel.as_ref()
    }

    /// Control phase currently applied: the center of the argmax bin.
    pub fn correction(&self) -> Phase {
        self.posterior.bin_center(self.correction_bin)
    }

    pub fn correction_bin(&self) -> usize {
        self.correction_bin
    }

    /// Swaps in a different (already normalized) prior and re-derives the
    /// correction from its maximum.
    pub fn replace_posterior(
        &mut self,
        posterior: CircularDistribution,
    ) -> Result<(), FilterError> {
        if posterior.n_bins() != self.n_bins() {
            return Err(CircularError::BinCountMismatch(posterior.n_bins(), self.n_bins()).into());
        }
        self.posterior = posterior;
        self.posterior.normalize()?;
        self.correction_bin = argmax_bin(&self.posterior);
        Ok(())
    }

    /// Predict step: convolve the posterior with the diffusion kernel.
    /// Identity when `D = 0`.
    pub fn predict(&mut self) {
        if let Some(convolver) = &self.convolver {
            self.posterior = convolver
                .convolve(&self.posterior)
                .expect("kernel and posterior share a grid");
        }
    }

    /// Update step: multiply each bin by the likelihood of `outcome` given
    /// that bin's phase and the correction held during the slot, then
    /// renormalize.
    pub fn update(&mut self, outcome: ClickOutcome) -> Result<(), FilterError> {
        let n = self.n_bins();
        let a = self.correction_bin;
        let table = &self.no_click_likelihood;
        let weights = self.posterior.weights_mut();
        if outcome.clicked {
            for (i, w) in weights.iter_mut().enumerate() {
                *w *= 1.0 - table[(i + n - a) % n];
            }
        } else {
            for (i, w) in weights.iter_mut().enumerate() {
                *w *= table[(i + n - a) % n];
            }
        }
        self.posterior
            .normalize()
            .map_err(|_| FilterError::Degenerate)
    }

    /// Correct step: move the control phase to the posterior maximum and
    /// return it. The returned phase applies to the next slot.
    pub fn correct(&mut self) -> Phase {
        self.correction_bin = argmax_bin(&self.posterior);
        self.correction()
    }

    /// One full slot: predict, update with the observed outcome, correct.
    pub fn step(&mut self, outcome: ClickOutcome) -> Result<Phase, FilterError> {
        self.predict();
        self.update(outcome)?;
        Ok(self.correct())
    }

    /// Ordered `(bin_center, weight)` snapshot of the posterior.
    pub fn posterior_pairs(&self) -> Vec<(Phase, f64)> {
        self.posterior.pairs().collect()
    }
}

/// Tabulates `exp(-I0 * dt * (1 - cos(d * bin_width)))` over bin offsets `d`,
/// using the signed principal offset so `table[d] == table[n - d]` bit-exactly.
fn no_click_table(params: &SystemParams, n_bins: usize) -> Vec<f64> {
    let mean_photons = params.mean_photons_per_slot();
    let delta = std::f64::consts::TAU / n_bins as f64;
    (0..n_bins)
        .map(|d| {
            let signed = if d <= n_bins / 2 {
                d as f64
            } else {
                d as f64 - n_bins as f64
            };
            let angle = signed * delta;
            (-mean_photons * (1.0 - angle.cos())).exp()
        })
        .collect()
}
