//! MAC vs AC energy accounting: what binary activations save in the
//! feature-mix layers of a long-sequence model.
//!
//!     cargo run --release --example energy_accounting

use spike_ssm::harness::{estimate_energy, EnergyModel, LayerOps};

fn main() -> spike_ssm::Result<()> {
    let model = EnergyModel::default();
    println!(
        "per-op cost: multiply-accumulate {:.1} pJ, accumulate {:.1} pJ\n",
        model.e_mac * 1e12,
        model.e_ac * 1e12
    );

    // 16 feature-mix layers projecting 1024 -> 2048 over an 8192-step
    // sequence: 16 * 2048 * 1024 * 8192 = 274.9 G dense operations.
    let dense_per_layer = 2048.0 * 1024.0 * 8192.0;
    let rates = [
        0.18, 0.22, 0.26, 0.31, 0.29, 0.25, 0.24, 0.27, 0.28, 0.26, 0.25, 0.23, 0.27, 0.25, 0.24,
        0.22,
    ];
    let layers: Vec<LayerOps> = rates
        .iter()
        .map(|&spiking_rate| LayerOps {
            dense_ops: dense_per_layer,
            spiking_rate,
        })
        .collect();

    let report = estimate_energy(&layers, &model)?;
    println!(
        "dense (every op a MAC): {:7.2} G ops -> {:8.2} mJ",
        report.mac_ops / 1e9,
        report.mac_energy_j * 1e3
    );
    println!(
        "spike-gated accumulate: {:7.2} G ops -> {:8.2} mJ",
        report.ac_ops / 1e9,
        report.ac_energy_j * 1e3
    );
    println!(
        "saving factor: {:.1}x\n",
        report.mac_energy_j / report.ac_energy_j
    );

    println!("per-layer breakdown (first 4):");
    for layer in report.layers.iter().take(4) {
        println!(
            "  layer {:>2}: rate {:.2} -> {:6.2} G ACs, {:5.2} mJ",
            layer.layer,
            layer.spiking_rate,
            layer.ac_ops / 1e9,
            layer.ac_energy_j * 1e3
        );
    }
    Ok(())
}
