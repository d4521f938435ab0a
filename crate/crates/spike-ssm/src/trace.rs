//! Core sequence types: real-valued traces and binary spike trains.
//!
//! Sequences are indexed from time step t = 1 in the dynamics equations;
//! storage index 0 holds t = 1.

use crate::error::{Error, Result};

/// A finite real-valued sequence of length >= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    values: Vec<f64>,
}

impl Trace {
    /// Wraps a sample vector, rejecting empty or non-finite input.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain(
                "trace must contain at least one sample".into(),
            ));
        }
        if let Some(idx) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite sample {} at index {idx}",
                values[idx]
            )));
        }
        Ok(Self { values })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![0.0; len])
    }

    #[allow(clippy::len_without_is_empty)] // a trace is never empty
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// A binary spike sequence of length >= 1; every element is 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpikeTrain {
    spikes: Vec<u8>,
}

impl SpikeTrain {
    /// Wraps a bit vector, rejecting empty input and values other than 0/1.
    pub fn from_bits(spikes: Vec<u8>) -> Result<Self> {
        if spikes.is_empty() {
            return Err(Error::Domain(
                "spike train must contain at least one step".into(),
            ));
        }
        if let Some(idx) = spikes.iter().position(|&s| s > 1) {
            return Err(Error::Domain(format!(
                "spike value {} at index {idx} is not binary",
                spikes[idx]
            )));
        }
        Ok(Self { spikes })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::from_bits(vec![0; len])
    }

    pub fn ones(len: usize) -> Result<Self> {
        Self::from_bits(vec![1; len])
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.spikes.len()
    }

    pub fn bits(&self) -> &[u8] {
        &self.spikes
    }

    /// Mean of the spike values: the spiking rate, in [0, 1].
    pub fn rate(&self) -> f64 {
        let ones: u64 = self.spikes.iter().map(|&s| u64::from(s)).sum();
        ones as f64 / self.spikes.len() as f64
    }

    /// The spikes as 0.0/1.0 samples, e.g. for convolution staging.
    pub fn to_trace(&self) -> Trace {
        Trace {
            values: self.spikes.iter().map(|&s| f64::from(s)).collect(),
        }
    }
}
