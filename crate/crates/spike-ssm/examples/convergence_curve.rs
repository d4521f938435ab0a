//! How many parallel iterations does a spike train need? Print the mean
//! explicit fraction per iteration budget as a terminal bar chart.
//!
//!     cargo run --release --example convergence_curve

use spike_ssm::harness::{run_converge, ConvergeOptions};
use spike_ssm::{FireMode, NeuronParams};

fn main() -> spike_ssm::Result<()> {
    let opts = ConvergeOptions {
        seed: 42,
        length: 1024,
        channels: 64,
        max_budget: 10,
        mode: FireMode::AllZero,
        neuron: NeuronParams::soft_reset(0.1, 1.0, 1.0)?,
    };
    let report = run_converge(&opts)?;

    println!(
        "explicit spiking fraction, {} channels x {} steps (tau={}, v_th={}):",
        report.channels, report.length, report.tau, report.v_th
    );
    for row in &report.rows {
        let bar = "#".repeat((row.mean_explicit * 60.0).round() as usize);
        println!(
            "  budget {:>2}: {:6.2}% |{bar}",
            row.budget,
            row.mean_explicit * 100.0
        );
    }
    println!(
        "\nserial resolution would take {} sequential steps per channel.",
        report.length
    );
    Ok(())
}
