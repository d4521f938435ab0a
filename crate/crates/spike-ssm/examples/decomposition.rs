//! Split the membrane potential into its input-driven part `k` and its
//! spike-driven part `m`, and check `u = k - m + v_th` against the serial
//! run.
//!
//!     cargo run --release --example decomposition

use spike_ssm::harness::sampling::{gaussian_trace, rng_for};
use spike_ssm::{decompose, serial_lif, NeuronParams};

fn main() -> spike_ssm::Result<()> {
    let params = NeuronParams::refractory(0.3, 0.6, 1.0, 0.8)?;
    let input = gaussian_trace(&mut rng_for(7, 0), 2048);

    let (spikes, membrane) = serial_lif(&params, &input)?;
    let parts = decompose(&params, &input, &spikes)?;

    let mut worst = 0.0f64;
    for t in 0..input.len() {
        let rebuilt = parts.k.values()[t] - parts.m.values()[t] + params.v_th;
        worst = worst.max((rebuilt - membrane.values()[t]).abs());
    }

    println!(
        "refractory neuron, {} steps, spiking rate {:.3}",
        input.len(),
        spikes.rate()
    );
    println!("first steps of k: {:?}", &parts.k.values()[..4]);
    println!("first steps of m: {:?}", &parts.m.values()[..4]);
    println!("max |u - (k - m + v_th)| = {worst:.3e}");

    // The split is what makes parallel resolution possible: k never looks at
    // the spikes, m never looks at the input.
    assert!(worst < 1e-9);
    Ok(())
}
