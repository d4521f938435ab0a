//! Stop the solver early on purpose and settle the leftover fuzzy steps
//! with each fill policy.
//!
//!     cargo run --release --example fire_modes

use spike_ssm::harness::sampling::{gaussian_trace, rng_for};
use spike_ssm::{pmbc_solve, serial_lif, FireMode, NeuronParams};

fn main() -> spike_ssm::Result<()> {
    // A slow-decay neuron driven hard: bounds tighten less per iteration,
    // so a budget of one leaves plenty undecided.
    let params = NeuronParams::soft_reset(0.9, 1.0, 0.5)?;
    let input = gaussian_trace(&mut rng_for(11, 0), 512);
    let (oracle, _) = serial_lif(&params, &input)?;

    println!("budget: 1 iteration, L = {}", input.len());
    println!("serial oracle rate: {:.4}\n", oracle.rate());
    for mode in [
        FireMode::AllOne,
        FireMode::AllZero,
        FireMode::MeanRate { seed: 1234 },
        FireMode::Midpoint,
    ] {
        let result = pmbc_solve(&params, &input, 1, mode)?;
        let agree = result
            .spikes
            .bits()
            .iter()
            .zip(oracle.bits())
            .filter(|(a, b)| a == b)
            .count();
        println!(
            "{:>8}: fuzzy rate {:.4}, filled rate {:.4}, oracle agreement {:.4}",
            mode.name(),
            result.fuzzy_rate,
            result.spikes.rate(),
            agree as f64 / input.len() as f64
        );
    }

    println!("\nwith the full budget every mode is exact:");
    let exact = pmbc_solve(&params, &input, input.len(), FireMode::Midpoint)?;
    println!(
        "fuzzy rate {:.4}, oracle match: {}",
        exact.fuzzy_rate,
        exact.spikes == oracle
    );
    Ok(())
}
