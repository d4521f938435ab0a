//! Time the serial oracle against the batched parallel solver across
//! sequence lengths.
//!
//! The serial side walks channels one by one on a single thread; the
//! parallel side shares one kernel spectrum and spreads channels over the
//! rayon pool. On wide machines the parallel side wins and its advantage
//! grows with length; on narrow hosts the FFT arithmetic outweighs two
//! cores' worth of parallelism.
//!
//!     cargo run --release --example speed_benchmark

use spike_ssm::harness::{run_bench, BenchOptions};
use spike_ssm::{FireMode, NeuronParams};

fn main() -> spike_ssm::Result<()> {
    let opts = BenchOptions {
        seed: 42,
        lengths: vec![256, 1024, 4096, 8192],
        channels: 64,
        iters: 3,
        mode: FireMode::AllZero,
        repeats: 5,
        warmup: 2,
        neuron: NeuronParams::soft_reset(0.1, 1.0, 1.0)?,
    };
    let report = run_bench(&opts)?;

    println!(
        "{} channels, {} solver iterations, median of {} runs, {} threads for the batched side\n",
        report.channels, report.iters, report.repeats, report.pmbc_threads
    );
    println!(
        "{:>7} {:>14} {:>14} {:>9}",
        "length", "serial (ms)", "batched (ms)", "speedup"
    );
    for row in &report.rows {
        println!(
            "{:>7} {:>14.3} {:>14.3} {:>8.2}x",
            row.length,
            row.serial_seconds * 1e3,
            row.pmbc_seconds * 1e3,
            row.speedup
        );
    }
    Ok(())
}
