//! Physical model: interferometer port intensities, Geiger-mode click
//! probabilities, click sampling, and the random walk driving the relative
//! phase.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::circular::Phase;

/// Above this mean photon number per slot the single-click detection model
/// starts to lose multi-photon events; callers should surface a warning.
pub const LOW_POWER_WARN_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsError {
    #[error("intensity per beam must be positive and finite, got {0}")]
    InvalidIntensity(f64),
    #[error("diffusion must be non-negative and finite, got {0}")]
    InvalidDiffusion(f64),
    #[error("slot duration must be positive and finite, got {0}")]
    InvalidSlotDuration(f64),
}

/// Physical parameters of a run: per-beam intensity `I0` (photons per unit
/// time), phase diffusion `D` (rad^2 per unit time), slot duration `dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    intensity_per_beam: f64,
    diffusion: f64,
    slot_duration: f64,
}

impl SystemParams {
    pub fn new(
        intensity_per_beam: f64,
        diffusion: f64,
        slot_duration: f64,
    ) -> Result<Self, ParamsError> {
        if !intensity_per_beam.is_finite() || intensity_per_beam <= 0.0 {
            return Err(ParamsError::InvalidIntensity(intensity_per_beam));
        }
        if !diffusion.is_finite() || diffusion < 0.0 {
            return Err(ParamsError::InvalidDiffusion(diffusion));
        }
        if !slot_duration.is_finite() || slot_duration <= 0.0 {
            return Err(ParamsError::InvalidSlotDuration(slot_duration));
        }
        Ok(Self {
            intensity_per_beam,
            diffusion,
            slot_duration,
        })
    }

    pub fn intensity_per_beam(&self) -> f64 {
        self.intensity_per_beam
    }

    pub fn diffusion(&self) -> f64 {
        self.diffusion
    }

    pub fn slot_duration(&self) -> f64 {
        self.slot_duration
    }

    /// `I0 * dt`, the mean photon number one beam delivers in a slot.
    pub fn mean_photons_per_slot(&self) -> f64 {
        self.intensity_per_beam * self.slot_duration
    }

    /// Variance `2 * D * dt` of the per-slot phase increment.
    pub fn increment_variance(&self) -> f64 {
        2.0 * self.diffusion * self.slot_duration
    }

    /// Warns when the photon flux is high enough that collapsing multi-photon
    /// events into single clicks discards real information.
    pub fn low_power_warning(&self) -> Option<String> {
        let mean = self.mean_photons_per_slot();
        (mean > LOW_POWER_WARN_THRESHOLD).then(|| {
            format!(
                "mean photon number per slot I0*dt = {mean:.3} exceeds {LOW_POWER_WARN_THRESHOLD}; \
                 the on/off detection model is intended for the photon-starved regime"
            )
        })
    }
}

/// Outcome of one detection slot at the dark port: no photon, or at least one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClickOutcome {
    pub clicked: bool,
}

impl ClickOutcome {
    pub fn count(&self) -> u8 {
        self.clicked as u8
    }
}

/// Bright-port intensity `I0 * (1 + cos(phase_error))`.
pub fn bright_intensity(params: &SystemParams, phase_error: Phase) -> f64 {
    params.intensity_per_beam() * (1.0 + phase_error.radians().cos())
}

/// Dark-port intensity `I0 * (1 - cos(phase_error))`, computed as the
/// complement of the bright port so the two always sum to exactly `2 * I0`.
pub fn dark_intensity(params: &SystemParams, phase_error: Phase) -> f64 {
    2.0 * params.intensity_per_beam() - bright_intensity(params, phase_error)
}

/// Probability of seeing no photon at the dark port in one slot:
/// `exp(-I0 * dt * (1 - cos(phase_error)))`.
pub fn prob_no_click(params: &SystemParams, phase_error: Phase) -> f64 {
    (-dark_intensity(params, phase_error) * params.slot_duration()).exp()
}

/// Probability of at least one dark-port photon in one slot.
pub fn prob_click(params: &SystemParams, phase_error: Phase) -> f64 {
    1.0 - prob_no_click(params, phase_error)
}

/// One Bernoulli draw against [`prob_click`]. Consumes exactly one uniform
/// variate from `rng`.
pub fn sample_click<R: Rng + ?Sized>(
    params: &SystemParams,
    phase_error: Phase,
    rng: &mut R,
) -> ClickOutcome {
    let u: f64 = rng.random();
    ClickOutcome {
        clicked: u < prob_click(params, phase_error),
    }
}

/// Advances the phase by one random-walk step with increment
/// `Normal(0, 2 * D * dt)`, rewrapped to the principal interval.
///
/// Always consumes exactly one normal variate, even for `D = 0`, so RNG
/// streams stay aligned across diffusion settings.
pub fn diffuse_phase<R: Rng + ?Sized>(phase: Phase, params: &SystemParams, rng: &mut R) -> Phase {
    let z: f64 = StandardNormal.sample(rng);
    let sigma = params.increment_variance().sqrt();
    phase.offset_by(sigma * z)
}
