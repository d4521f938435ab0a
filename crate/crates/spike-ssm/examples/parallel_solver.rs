//! Resolve a spike train without stepping through time: watch the upper
//! and lower bounds close in over a few parallel iterations, then compare
//! against the serial oracle.
//!
//!     cargo run --release --example parallel_solver

use spike_ssm::harness::sampling::{gaussian_trace, rng_for};
use spike_ssm::{pmbc_solve_traced, serial_lif, FireMode, NeuronParams};

fn main() -> spike_ssm::Result<()> {
    let params = NeuronParams::soft_reset(0.1, 1.0, 1.0)?;
    let input = gaussian_trace(&mut rng_for(42, 0), 1024);

    let (result, records) = pmbc_solve_traced(&params, &input, 1024, FireMode::AllZero)?;
    println!("bounds after each iteration (L = {}):", input.len());
    for record in &records {
        let fuzzy: usize = record
            .s_up
            .bits()
            .iter()
            .zip(record.s_low.bits())
            .filter(|(u, l)| u != l)
            .count();
        println!(
            "  iteration {:>2}: {:>4} steps undecided ({:.2}% explicit)",
            record.iteration,
            fuzzy,
            100.0 * (1.0 - fuzzy as f64 / input.len() as f64)
        );
    }
    println!(
        "converged after {} iterations, fuzzy rate {:.4}",
        result.bounds.iterations_run(),
        result.fuzzy_rate
    );

    let (oracle, _) = serial_lif(&params, &input)?;
    println!(
        "serial oracle agreement: {}",
        if result.spikes == oracle {
            "bitwise equal"
        } else {
            "MISMATCH"
        }
    );
    println!("spiking rate {:.4}", result.spikes.rate());
    Ok(())
}
