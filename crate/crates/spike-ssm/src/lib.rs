//! Leaky integrate-and-fire spike trains without serial time-stepping.
//!
//! The membrane potential of a reset-bearing LIF neuron depends on its own
//! spiking history, which normally forces one pass over the sequence, one
//! step at a time. This crate resolves the spike train in parallel instead:
//! the potential splits into an input-driven trace `k` and a spike-driven
//! trace `m`, both causal convolutions, and per-step upper/lower bounds on
//! the spike train are tightened by comparing `k` against the `m` traces of
//! the bounds. A handful of iterations decides almost every step; whatever
//! stays fuzzy is settled by a configurable fire policy.
//!
//! What's in the box:
//!
//! - [`neuron`]: serial reference dynamics (no reset, hard reset, soft
//!   reset, refractory), the k/m membrane decomposition, and the piecewise
//!   quadratic surrogate gradient.
//! - [`kernels`]: FFT causal convolution with zero padding, exponential and
//!   refractory kernels, diagonal state-space kernels with zero-order hold.
//! - [`pmbc`]: the parallel max-min boundary compression solver, batched
//!   across channels, with convergence diagnostics.
//! - [`block`]: a spiking state-space block (SSM, spiking activation,
//!   gated feature mix) with per-layer statistics.
//! - [`harness`]: verification suites, speed benchmark, convergence curves,
//!   and MAC/AC energy accounting behind the `spike-ssm` binary.
//!
//! Start with the examples; each one exercises a single capability end to
//! end (`cargo run --release --example parallel_solver`, etc.).
//!
//! ```
//! use spike_ssm::{pmbc_solve, serial_lif, FireMode, NeuronParams, Trace};
//!
//! let neuron = NeuronParams::soft_reset(0.5, 1.0, 1.0)?; // tau, v_th, u_th
//! let drive = Trace::new(vec![1.2, 0.8, 0.1, 1.0])?;
//!
//! let (spikes, _membrane) = serial_lif(&neuron, &drive)?;   // stepped serially
//! let result = pmbc_solve(&neuron, &drive, 4, FireMode::AllZero)?; // resolved in parallel
//!
//! assert_eq!(result.spikes, spikes);
//! assert_eq!(result.spikes.bits(), &[1, 0, 0, 1]);
//! # Ok::<(), spike_ssm::Error>(())
//! ```

pub mod block;
pub mod error;
pub mod harness;
pub mod kernels;
pub mod neuron;
pub mod pmbc;
pub mod trace;

pub use error::{Error, Result};
pub use kernels::{
    causal_conv, causal_conv_direct, exp_kernel, refractory_kernel, shift_one, ssm_kernel,
    ssm_recurrent, ConvPlan, Kernel, SsmLayerParams,
};
pub use neuron::{
    decompose, serial_lif, surrogate, surrogate_grad, Decomposition, NeuronParams, ResetMode,
};
pub use pmbc::{
    explicit_fraction, pmbc_solve, pmbc_solve_batch, pmbc_solve_traced, resolve_fuzzy, BoundState,
    FireMode, IterationRecord, PmbcResult,
};
pub use trace::{SpikeTrain, Trace};
