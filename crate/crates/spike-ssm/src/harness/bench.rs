//! Serial-vs-parallel wall-clock benchmark.
//!
//! For each sequence length the harness times (a) the serial oracle walked
//! over every channel on one thread — the reference cost of strict
//! time-stepping — and (b) the batched boundary-compression solve, which
//! shares one kernel spectrum and fans channels out across the rayon pool.
//! Median of `repeats` timed runs after `warmup` discarded runs, monotonic
//! clock, reported as batch passes per second.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harness::report::{fmt_f64, Report, Table};
use crate::harness::sampling::{gaussian_trace, rng_for};
use crate::neuron::{serial_lif, NeuronParams};
use crate::pmbc::{pmbc_solve_batch, FireMode};
use crate::trace::Trace;

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub seed: u64,
    pub lengths: Vec<usize>,
    pub channels: usize,
    pub iters: usize,
    pub mode: FireMode,
    pub repeats: usize,
    pub warmup: usize,
    pub neuron: NeuronParams,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchRow {
    pub length: usize,
    pub serial_seconds: f64,
    pub pmbc_seconds: f64,
    pub serial_iters_per_s: f64,
    pub pmbc_iters_per_s: f64,
    pub speedup: f64,
    /// Mean spiking rates, as a determinism fingerprint of the outputs.
    pub serial_rate: f64,
    pub pmbc_rate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchReport {
    pub seed: u64,
    pub channels: usize,
    pub iters: usize,
    pub fire_mode: String,
    pub repeats: usize,
    pub warmup: usize,
    /// Threads available to the batched solver; the serial baseline always
    /// runs on one.
    pub pmbc_threads: usize,
    pub rows: Vec<BenchRow>,
}

impl Report for BenchReport {
    fn to_table(&self) -> Table {
        let mut table = Table::new(&[
            "length",
            "serial_seconds",
            "pmbc_seconds",
            "serial_iters_per_s",
            "pmbc_iters_per_s",
            "speedup",
        ]);
        for row in &self.rows {
            table.push_row(vec![
                row.length.to_string(),
                fmt_f64(row.serial_seconds),
                fmt_f64(row.pmbc_seconds),
                fmt_f64(row.serial_iters_per_s),
                fmt_f64(row.pmbc_iters_per_s),
                fmt_f64(row.speedup),
            ]);
        }
        table
    }
}

fn median_seconds(mut samples: Vec<f64>) -> f64 {
    samples.sort_by(|a, b| a.total_cmp(b));
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        0.5 * (samples[n / 2 - 1] + samples[n / 2])
    }
}

fn time_runs<T>(warmup: usize, repeats: usize, mut run: impl FnMut() -> T) -> (f64, T) {
    for _ in 0..warmup {
        std::hint::black_box(run());
    }
    let mut samples = Vec::with_capacity(repeats);
    let mut last = None;
    for _ in 0..repeats {
        let start = Instant::now();
        let value = std::hint::black_box(run());
        samples.push(start.elapsed().as_secs_f64());
        last = Some(value);
    }
    (median_seconds(samples), last.expect("repeats >= 1"))
}

pub fn run_bench(opts: &BenchOptions) -> Result<BenchReport> {
    let mut rows = Vec::with_capacity(opts.lengths.len());
    for (cell, &length) in opts.lengths.iter().enumerate() {
        let inputs: Vec<Trace> = (0..opts.channels)
            .map(|ch| {
                let mut rng = rng_for(opts.seed, (cell * opts.channels + ch) as u64);
                gaussian_trace(&mut rng, length)
            })
            .collect();

        // Fail fast outside the timed region.
        serial_lif(&opts.neuron, &inputs[0])?;
        pmbc_solve_batch(&opts.neuron, &inputs, opts.iters, opts.mode)?;

        let (serial_seconds, serial_spikes) = time_runs(opts.warmup, opts.repeats, || {
            let mut total = 0u64;
            for input in &inputs {
                let (spikes, _membrane) = serial_lif(&opts.neuron, input).expect("validated above");
                total += spikes.bits().iter().map(|&s| u64::from(s)).sum::<u64>();
            }
            total
        });

        let (pmbc_seconds, pmbc_spikes) = time_runs(opts.warmup, opts.repeats, || {
            let results = pmbc_solve_batch(&opts.neuron, &inputs, opts.iters, opts.mode)
                .expect("validated above");
            results
                .iter()
                .map(|r| r.spikes.bits().iter().map(|&s| u64::from(s)).sum::<u64>())
                .sum::<u64>()
        });

        let steps = (opts.channels * length) as f64;
        rows.push(BenchRow {
            length,
            serial_seconds,
            pmbc_seconds,
            serial_iters_per_s: 1.0 / serial_seconds,
            pmbc_iters_per_s: 1.0 / pmbc_seconds,
            speedup: serial_seconds / pmbc_seconds,
            serial_rate: serial_spikes as f64 / steps,
            pmbc_rate: pmbc_spikes as f64 / steps,
        });
    }
    Ok(BenchReport {
        seed: opts.seed,
        channels: opts.channels,
        iters: opts.iters,
        fire_mode: opts.mode.name().into(),
        repeats: opts.repeats,
        warmup: opts.warmup,
        pmbc_threads: rayon::current_num_threads(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_is_well_formed_at_tiny_sizes() {
        let opts = BenchOptions {
            seed: 3,
            lengths: vec![16],
            channels: 1,
            iters: 2,
            mode: FireMode::AllZero,
            repeats: 3,
            warmup: 1,
            neuron: NeuronParams::soft_reset(0.1, 1.0, 1.0).unwrap(),
        };
        let report = run_bench(&opts).unwrap();
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        assert!(row.serial_seconds > 0.0 && row.pmbc_seconds > 0.0);
        assert!(row.serial_iters_per_s > 0.0 && row.pmbc_iters_per_s > 0.0);
        assert!(row.serial_rate >= 0.0 && row.serial_rate <= 1.0);
    }

    #[test]
    fn non_timing_fields_are_seed_deterministic() {
        let opts = BenchOptions {
            seed: 5,
            lengths: vec![32, 64],
            channels: 4,
            iters: 3,
            mode: FireMode::AllZero,
            repeats: 2,
            warmup: 0,
            neuron: NeuronParams::soft_reset(0.2, 1.0, 1.0).unwrap(),
        };
        let a = run_bench(&opts).unwrap();
        let b = run_bench(&opts).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.serial_rate, rb.serial_rate);
            assert_eq!(ra.pmbc_rate, rb.pmbc_rate);
        }
    }

    #[test]
    fn median_of_odd_and_even_sample_counts() {
        assert_eq!(median_seconds(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median_seconds(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
