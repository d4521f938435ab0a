//! MAC/AC energy accounting.
//!
//! A dense linear layer performs one multiply-accumulate per weight per
//! position. With binary activations the multiply disappears: only the
//! columns whose input spiked are accumulated, so the operation count drops
//! to `dense ops x spiking rate` and each operation costs the cheaper
//! accumulate energy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::report::{fmt_f64, Report, Table};

/// Joules per multiply-accumulate and per accumulate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EnergyModel {
    pub e_mac: f64,
    pub e_ac: f64,
}

impl EnergyModel {
    /// 45 nm process figures commonly used for this estimate.
    pub const DEFAULT_E_MAC: f64 = 4.6e-12;
    pub const DEFAULT_E_AC: f64 = 0.9e-12;

    pub fn new(e_mac: f64, e_ac: f64) -> Result<Self> {
        if !e_mac.is_finite() || e_mac <= 0.0 || !e_ac.is_finite() || e_ac <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "per-op energies must be positive, got e_mac={e_mac}, e_ac={e_ac}"
            )));
        }
        Ok(Self { e_mac, e_ac })
    }
}

impl Default for EnergyModel {
    fn default() -> Self {
        Self {
            e_mac: Self::DEFAULT_E_MAC,
            e_ac: Self::DEFAULT_E_AC,
        }
    }
}

/// One layer's dense operation count and the spiking rate of its input.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LayerOps {
    pub dense_ops: f64,
    pub spiking_rate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LayerEnergy {
    pub layer: usize,
    pub dense_ops: f64,
    pub spiking_rate: f64,
    pub ac_ops: f64,
    pub ac_energy_j: f64,
}

/// Totals plus the per-layer breakdown. `mac_*` is the cost of running the
/// same layers densely; `ac_*` the cost with spike-gated accumulates.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EnergyReport {
    pub e_mac_j: f64,
    pub e_ac_j: f64,
    pub mac_ops: f64,
    pub ac_ops: f64,
    pub mac_energy_j: f64,
    pub ac_energy_j: f64,
    pub layers: Vec<LayerEnergy>,
}

/// Energy estimate: `mac_energy = sum(dense) * e_mac` and
/// `ac_energy = sum(dense * rate) * e_ac`, exactly.
pub fn estimate_energy(layers: &[LayerOps], model: &EnergyModel) -> Result<EnergyReport> {
    EnergyModel::new(model.e_mac, model.e_ac)?;
    if layers.is_empty() {
        return Err(Error::InvalidParam(
            "energy estimate needs at least one layer".into(),
        ));
    }
    let mut breakdown = Vec::with_capacity(layers.len());
    let mut mac_ops = 0.0;
    let mut ac_ops = 0.0;
    for (layer, ops) in layers.iter().enumerate() {
        if !ops.dense_ops.is_finite() || ops.dense_ops < 0.0 {
            return Err(Error::InvalidParam(format!(
                "layer {layer}: dense op count must be non-negative, got {}",
                ops.dense_ops
            )));
        }
        if !ops.spiking_rate.is_finite() || !(0.0..=1.0).contains(&ops.spiking_rate) {
            return Err(Error::InvalidParam(format!(
                "layer {layer}: spiking rate must lie in [0, 1], got {}",
                ops.spiking_rate
            )));
        }
        let layer_ac = ops.dense_ops * ops.spiking_rate;
        mac_ops += ops.dense_ops;
        ac_ops += layer_ac;
        breakdown.push(LayerEnergy {
            layer,
            dense_ops: ops.dense_ops,
            spiking_rate: ops.spiking_rate,
            ac_ops: layer_ac,
            ac_energy_j: layer_ac * model.e_ac,
        });
    }
    Ok(EnergyReport {
        e_mac_j: model.e_mac,
        e_ac_j: model.e_ac,
        mac_ops,
        ac_ops,
        mac_energy_j: mac_ops * model.e_mac,
        ac_energy_j: ac_ops * model.e_ac,
        layers: breakdown,
    })
}

impl Report for EnergyReport {
    fn to_table(&self) -> Table {
        let mut table = Table::new(&[
            "layer",
            "dense_ops",
            "spiking_rate",
            "ac_ops",
            "ac_energy_j",
        ]);
        for layer in &self.layers {
            table.push_row(vec![
                layer.layer.to_string(),
                fmt_f64(layer.dense_ops),
                fmt_f64(layer.spiking_rate),
                fmt_f64(layer.ac_ops),
                fmt_f64(layer.ac_energy_j),
            ]);
        }
        table.push_row(vec![
            "total".into(),
            fmt_f64(self.mac_ops),
            String::new(),
            fmt_f64(self.ac_ops),
            fmt_f64(self.ac_energy_j),
        ]);
        table
    }
}
