//! Config file handling. The on-disk format is a flat key/value JSON document
//! whose keys are exactly the simulation-config field names; unknown keys are
//! rejected so typos in physics parameters cannot pass silently.

use std::path::Path;

use beamcomb::{wrap_phase, InitialPhase, SimConfig, SystemParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// `initial_phase` is either a number (radians) or the string `"random"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialPhaseField {
    Radians(f64),
    Keyword(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub intensity_per_beam: f64,
    pub diffusion: f64,
    pub slot_duration: f64,
    pub n_slots: usize,
    pub n_bins: usize,
    pub seed: u64,
    pub initial_phase: InitialPhaseField,
    pub burn_in_slots: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|err| {
            CliError::Config(format!("cannot read config {}: {err}", path.display()))
        })?;
        serde_json::from_str(&text).map_err(|err| {
            CliError::Config(format!("cannot parse config {}: {err}", path.display()))
        })
    }

    pub fn to_sim_config(&self) -> Result<SimConfig, CliError> {
        let params = SystemParams::new(self.intensity_per_beam, self.diffusion, self.slot_duration)
            .map_err(|err| CliError::Config(err.to_string()))?;
        let initial_phase = match &self.initial_phase {
            InitialPhaseField::Radians(radians) => InitialPhase::Fixed(
                wrap_phase(*radians).map_err(|err| CliError::Config(err.to_string()))?,
            ),
            InitialPhaseField::Keyword(word) if word == "random" => InitialPhase::Random,
            InitialPhaseField::Keyword(word) => {
                return Err(CliError::Config(format!(
                    "initial_phase must be a number or \"random\", got \"{word}\""
                )));
            }
        };
        let config = SimConfig {
            params,
            n_slots: self.n_slots,
            n_bins: self.n_bins,
            seed: self.seed,
            initial_phase,
            burn_in_slots: self.burn_in_slots,
            snapshot_every: self.snapshot_every,
        };
        config.validate()?;
        Ok(config)
    }
}
