//! Diagonal state-space layers evaluated two ways: step-by-step recurrence
//! and one long causal convolution with the unrolled kernel.
//!
//!     cargo run --release --example ssm_kernels

use num_complex::Complex;
use spike_ssm::harness::sampling::{gaussian_trace, rng_for};
use spike_ssm::{causal_conv, ssm_kernel, ssm_recurrent, SsmLayerParams};

fn main() -> spike_ssm::Result<()> {
    // A scalar system with a = -1 and delta = ln 2 halves its state each
    // step, so the kernel is geometric.
    let scalar = SsmLayerParams::new(
        vec![Complex::new(-1.0, 0.0)],
        vec![Complex::new(1.0, 0.0)],
        vec![Complex::new(1.0, 0.0)],
        std::f64::consts::LN_2,
    )?;
    println!("scalar kernel: {:?}\n", ssm_kernel(&scalar, 6)?.taps());

    // The s4d-lin layout spreads poles along the imaginary axis.
    let layer = SsmLayerParams::s4d_lin(8, 0.05)?;
    let poles: Vec<String> = layer.a.iter().take(4).map(|a| format!("{a:.2}")).collect();
    println!("s4d-lin poles (first 4 of 8): [{}]", poles.join(", "));

    let len = 512;
    let signal = gaussian_trace(&mut rng_for(3, 0), len);
    let via_kernel = causal_conv(&signal, &ssm_kernel(&layer, len)?)?;
    let via_recurrence = ssm_recurrent(&layer, &signal)?;

    let worst = via_kernel
        .values()
        .iter()
        .zip(via_recurrence.values())
        .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1.0))
        .fold(0.0f64, f64::max);
    println!("kernel route vs recurrence route over {len} steps: max rel err {worst:.2e}");
    assert!(worst < 1e-6);

    println!("first outputs: {:?}", &via_kernel.values()[..4]);
    Ok(())
}
