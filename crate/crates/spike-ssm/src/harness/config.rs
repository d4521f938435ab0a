//! Harness configuration: one JSON document with the top-level keys
//! `neuron`, `ssm`, `bench`, `energy` and `seed`. Unknown keys anywhere in
//! the document are rejected so typos fail loudly instead of silently
//! falling back to defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neuron::{NeuronParams, ResetMode};
use crate::pmbc::FireMode;

/// Output encoding selected with `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct HarnessConfig {
    pub neuron: NeuronSection,
    pub ssm: SsmSection,
    pub bench: BenchSection,
    pub energy: EnergySection,
    pub seed: u64,
}

impl HarnessConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let config: HarnessConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("cannot parse {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.neuron.to_params()?;
        self.bench.validate()?;
        self.ssm.validate()?;
        self.energy.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResetKind {
    None,
    Hard,
    Soft,
    Refractory,
}

/// Neuron hyperparameters as written in the config file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct NeuronSection {
    pub tau: f64,
    pub tau_r: f64,
    pub v_th: f64,
    pub u_th: f64,
    pub reset: ResetKind,
    /// Reset value of the hard mode; ignored otherwise.
    pub u_r: f64,
}

impl Default for NeuronSection {
    fn default() -> Self {
        Self {
            tau: 0.1,
            tau_r: 0.9,
            v_th: 1.0,
            u_th: 1.0,
            reset: ResetKind::Soft,
            u_r: 0.0,
        }
    }
}

impl NeuronSection {
    pub fn to_params(&self) -> Result<NeuronParams> {
        let mode = match self.reset {
            ResetKind::None => ResetMode::NoReset,
            ResetKind::Hard => ResetMode::HardReset { reset_to: self.u_r },
            ResetKind::Soft => ResetMode::SoftReset,
            ResetKind::Refractory => ResetMode::Refractory,
        };
        NeuronParams::new(self.tau, self.tau_r, self.v_th, self.u_th, mode)
            .map_err(|e| Error::Config(format!("neuron section: {e}")))
    }
}

/// Fire policy by name; the seed it may need comes from the top-level seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FireKind {
    AllOne,
    AllZero,
    MeanRate,
    Midpoint,
}

impl FireKind {
    pub fn to_mode(self, seed: u64) -> FireMode {
        match self {
            FireKind::AllOne => FireMode::AllOne,
            FireKind::AllZero => FireMode::AllZero,
            FireKind::MeanRate => FireMode::MeanRate { seed },
            FireKind::Midpoint => FireMode::Midpoint,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct BenchSection {
    pub lengths: Vec<usize>,
    pub channels: usize,
    pub iters: usize,
    pub fire_mode: FireKind,
    pub repeats: usize,
    pub warmup: usize,
}

impl Default for BenchSection {
    fn default() -> Self {
        Self {
            lengths: vec![1024, 8192],
            channels: 64,
            iters: 3,
            fire_mode: FireKind::AllZero,
            repeats: 5,
            warmup: 2,
        }
    }
}

impl BenchSection {
    pub fn validate(&self) -> Result<()> {
        if self.lengths.is_empty() {
            return Err(Error::Config("bench.lengths must not be empty".into()));
        }
        if self.lengths.contains(&0) {
            return Err(Error::Config("bench.lengths entries must be >= 1".into()));
        }
        for (name, value) in [
            ("bench.channels", self.channels),
            ("bench.iters", self.iters),
            ("bench.repeats", self.repeats),
        ] {
            if value == 0 {
                return Err(Error::Config(format!("{name} must be >= 1")));
            }
        }
        Ok(())
    }
}

/// Sizing of the demo block stack.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SsmSection {
    pub state_size: usize,
    pub delta: f64,
    pub layers: usize,
    pub channels: usize,
    pub length: usize,
}

impl Default for SsmSection {
    fn default() -> Self {
        Self {
            state_size: 8,
            delta: 0.05,
            layers: 2,
            channels: 8,
            length: 512,
        }
    }
}

impl SsmSection {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("ssm.state_size", self.state_size),
            ("ssm.layers", self.layers),
            ("ssm.channels", self.channels),
            ("ssm.length", self.length),
        ] {
            if value == 0 {
                return Err(Error::Config(format!("{name} must be >= 1")));
            }
        }
        if !self.delta.is_finite() || self.delta <= 0.0 {
            return Err(Error::Config("ssm.delta must be positive".into()));
        }
        Ok(())
    }
}

/// Per-operation energy in joules.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct EnergySection {
    pub e_mac: f64,
    pub e_ac: f64,
}

impl Default for EnergySection {
    fn default() -> Self {
        Self {
            e_mac: 4.6e-12,
            e_ac: 0.9e-12,
        }
    }
}

impl EnergySection {
    pub fn validate(&self) -> Result<()> {
        if !self.e_mac.is_finite()
            || self.e_mac <= 0.0
            || !self.e_ac.is_finite()
            || self.e_ac <= 0.0
        {
            return Err(Error::Config("energy costs must be positive".into()));
        }
        Ok(())
    }
}
