//! Seeded random instances shared by the suites and benchmarks.
//!
//! Everything downstream of one `u64` seed is deterministic, including
//! channel-parallel runs: each purpose derives its own stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::neuron::{NeuronParams, ResetMode};
use crate::trace::Trace;

/// Derives an independent stream seed from a base seed.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    base.wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn rng_for(base: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(base, stream))
}

/// Unit-Gaussian input trace.
pub fn gaussian_trace(rng: &mut ChaCha8Rng, len: usize) -> Trace {
    Trace::new((0..len).map(|_| rng.sample(StandardNormal)).collect())
        .expect("gaussian samples are finite and len >= 1")
}

/// Neuron parameters drawn from the study ranges: tau in (0.05, 0.95),
/// tau_r in [0, 0.95), v_th in (0.5, 2), u_th in [0, 2).
pub fn sample_neuron(rng: &mut ChaCha8Rng, mode: ResetMode) -> NeuronParams {
    let tau = rng.gen_range(0.05..0.95);
    let tau_r = match mode {
        ResetMode::Refractory => rng.gen_range(0.0..0.95),
        _ => 0.0,
    };
    let v_th = rng.gen_range(0.5..2.0);
    let u_th = rng.gen_range(0.0..2.0);
    NeuronParams::new(tau, tau_r, v_th, u_th, mode).expect("sampled ranges are valid")
}
