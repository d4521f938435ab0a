//! Causal convolution through the padded FFT against the quadratic direct
//! summation: same numbers, very different cost.
//!
//!     cargo run --release --example fft_convolution

use std::time::Instant;

use spike_ssm::harness::sampling::{gaussian_trace, rng_for};
use spike_ssm::{causal_conv, causal_conv_direct, exp_kernel, refractory_kernel, ConvPlan};

fn main() -> spike_ssm::Result<()> {
    println!(
        "exponential kernel taps (tau=0.5): {:?}",
        exp_kernel(0.5, 5)?.taps()
    );
    println!(
        "refractory kernel taps (tau=0.1, tau_r=0.9): {:?}\n",
        refractory_kernel(0.1, 0.9, 5)?.taps()
    );

    for len in [256usize, 1024, 4096, 16384] {
        let signal = gaussian_trace(&mut rng_for(1, len as u64), len);
        let kernel = exp_kernel(0.2, len)?;

        let start = Instant::now();
        let fast = causal_conv(&signal, &kernel)?;
        let fast_time = start.elapsed();

        let start = Instant::now();
        let slow = causal_conv_direct(&signal, &kernel)?;
        let slow_time = start.elapsed();

        let worst = fast
            .values()
            .iter()
            .zip(slow.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        println!(
            "L = {len:>5}: fft {:>9.3?}  direct {:>9.3?}  max abs diff {worst:.2e}",
            fast_time, slow_time
        );
    }

    // When one kernel meets many signals, freeze its spectrum once.
    let len = 4096;
    let kernel = exp_kernel(0.2, len)?;
    let plan = ConvPlan::new(&kernel);
    let signals: Vec<_> = (0..64)
        .map(|c| gaussian_trace(&mut rng_for(2, c), len))
        .collect();
    let start = Instant::now();
    for signal in &signals {
        plan.apply(signal)?;
    }
    println!(
        "\n64 signals through one frozen kernel spectrum: {:?}",
        start.elapsed()
    );
    Ok(())
}
