//! Forward one spiking state-space block, then a two-layer stack, and
//! print per-layer spiking statistics.
//!
//!     cargo run --release --example block_forward

use spike_ssm::block::{block_forward, spiking_rate_profile, BlockParams, MixParams};
use spike_ssm::harness::sampling::{gaussian_trace, rng_for};
use spike_ssm::{FireMode, NeuronParams, SsmLayerParams};

fn main() -> spike_ssm::Result<()> {
    let channels = 6;
    let len = 512;
    let neuron = NeuronParams::refractory(0.1, 0.9, 1.0, 1.0)?;
    let block = BlockParams::new(
        vec![SsmLayerParams::s4d_lin(8, 0.05)?; channels],
        neuron,
        MixParams::identity(channels)?,
    )?;
    let x: Vec<_> = (0..channels)
        .map(|c| gaussian_trace(&mut rng_for(5, c as u64), len))
        .collect();

    let out = block_forward(&block, &x, 3, FireMode::AllZero)?;
    println!("single block, {channels} channels x {len} steps:");
    println!(
        "  spiking rate per channel: {:?}",
        round3(&out.stats.spiking_rate_per_channel)
    );
    println!(
        "  mean rate {:.4}, fuzzy rate {:.4}",
        out.stats.spiking_rate_mean, out.stats.fuzzy_rate_mean
    );
    println!(
        "  stage seconds: ssm {:.4}, neuron {:.4}, mix {:.4}\n",
        out.stats.timing.ssm_seconds, out.stats.timing.neuron_seconds, out.stats.timing.mix_seconds
    );

    let stack = vec![block.clone(), block.clone(), block];
    let profile = spiking_rate_profile(&stack, &x, 3, FireMode::AllZero)?;
    println!("three-layer stack:");
    for (layer, stats) in profile.iter().enumerate() {
        println!(
            "  layer {layer}: mean rate {:.4}, fuzzy rate {:.4}",
            stats.spiking_rate_mean, stats.fuzzy_rate_mean
        );
    }
    Ok(())
}

fn round3(values: &[f64]) -> Vec<f64> {
    values.iter().map(|v| (v * 1e3).round() / 1e3).collect()
}
