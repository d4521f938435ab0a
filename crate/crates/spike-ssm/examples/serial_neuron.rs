//! Step the four LIF reset variants over the same input current and print
//! their membrane potentials and spike trains.
//!
//!     cargo run --release --example serial_neuron

use spike_ssm::{serial_lif, NeuronParams, ResetMode, Trace};

fn main() -> spike_ssm::Result<()> {
    let input = Trace::new(vec![1.2, 0.8, 0.1, 1.0, 0.3, 0.9, 1.5, 0.0])?;
    println!("input current: {:?}\n", input.values());

    let variants = [
        ("no reset", NeuronParams::no_reset(0.5, 1.0)?),
        (
            "hard reset",
            NeuronParams::new(0.5, 0.0, 1.0, 0.0, ResetMode::HardReset { reset_to: 0.0 })?,
        ),
        ("soft reset", NeuronParams::soft_reset(0.5, 1.0, 1.0)?),
        ("refractory", NeuronParams::refractory(0.5, 0.5, 1.0, 1.0)?),
    ];

    for (name, params) in variants {
        let (spikes, membrane) = serial_lif(&params, &input)?;
        let u: Vec<String> = membrane
            .values()
            .iter()
            .map(|u| format!("{u:+.3}"))
            .collect();
        println!(
            "{name:>10}: spikes {:?}  rate {:.3}",
            spikes.bits(),
            spikes.rate()
        );
        println!("{:>10}  membrane [{}]\n", "", u.join(", "));
    }
    Ok(())
}
