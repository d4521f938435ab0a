//! Parallel max-min boundary compression.
//!
//! The spike train of a soft-reset or refractory neuron is pinned between
//! two bounds: `s_up` starts all ones, `s_low` all zeros. Where even the
//! largest possible reset trace cannot hold the potential below threshold
//! (`k_t > m_up_t`) the step must spike; where even the smallest one keeps
//! it below (`k_t < m_low_t`) it cannot. Every tightened bit tightens the
//! `m` traces of the next round, so the bounds close in from both sides,
//! in parallel over all steps. Iteration stops as soon as a full round
//! changes nothing; steps still undecided after the budget are filled by a
//! [`FireMode`] policy.
//!
//! `k` and both `m` traces are causal convolutions, evaluated through one
//! padded FFT plan whose kernel spectrum is computed once per solve and
//! shared read-only across batched channels.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{exp_kernel, refractory_kernel, FftPair, FftWorkspace};
use crate::neuron::{NeuronParams, ResetMode};
use crate::trace::{SpikeTrain, Trace};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Policy for spike positions still undecided when iteration stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FireMode {
    /// Undecided steps fire.
    AllOne,
    /// Undecided steps stay silent.
    AllZero,
    /// Undecided steps draw Bernoulli with the mean rate of the decided
    /// steps, from an explicitly seeded generator.
    MeanRate { seed: u64 },
    /// An undecided step fires iff `k_t` clears the midpoint of its two
    /// reset-trace bounds.
    Midpoint,
}

impl FireMode {
    pub fn name(&self) -> &'static str {
        match self {
            FireMode::AllOne => "allone",
            FireMode::AllZero => "allzero",
            FireMode::MeanRate { .. } => "meanrate",
            FireMode::Midpoint => "midpoint",
        }
    }
}

/// Upper/lower spike bounds after some number of tightening rounds.
///
/// `s_low[t] <= s_up[t]` everywhere; entries of `s_low` only ever flip
/// 0 to 1 and entries of `s_up` only 1 to 0, so the set of decided steps
/// (where the two agree) grows monotonically.
#[derive(Debug, Clone)]
pub struct BoundState {
    s_up: SpikeTrain,
    s_low: SpikeTrain,
    iterations_run: usize,
}

impl BoundState {
    pub fn new(s_up: SpikeTrain, s_low: SpikeTrain, iterations_run: usize) -> Result<Self> {
        if s_up.len() != s_low.len() {
            return Err(Error::Shape(format!(
                "bound lengths disagree: up={}, low={}",
                s_up.len(),
                s_low.len()
            )));
        }
        if s_up.bits().iter().zip(s_low.bits()).any(|(&u, &l)| l > u) {
            return Err(Error::Invariant(
                "lower spike bound exceeds upper spike bound".into(),
            ));
        }
        Ok(Self {
            s_up,
            s_low,
            iterations_run,
        })
    }

    pub fn s_up(&self) -> &SpikeTrain {
        &self.s_up
    }

    pub fn s_low(&self) -> &SpikeTrain {
        &self.s_low
    }

    pub fn iterations_run(&self) -> usize {
        self.iterations_run
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.s_up.len()
    }

    /// True at steps the bounds have not yet decided.
    pub fn fuzzy_mask(&self) -> Vec<bool> {
        self.s_up
            .bits()
            .iter()
            .zip(self.s_low.bits())
            .map(|(&u, &l)| u != l)
            .collect()
    }

    pub fn fuzzy_count(&self) -> usize {
        self.s_up
            .bits()
            .iter()
            .zip(self.s_low.bits())
            .filter(|(&u, &l)| u != l)
            .count()
    }
}

/// Fraction of steps whose spike value the bounds have decided.
pub fn explicit_fraction(bounds: &BoundState) -> f64 {
    1.0 - bounds.fuzzy_count() as f64 / bounds.len() as f64
}

/// Outcome of a solve: the resolved spike train, the final bounds, the
/// fraction of steps that stayed fuzzy before the fill, and the explicit
/// fraction after each iteration (index 0 is the all-fuzzy initial state).
#[derive(Debug, Clone)]
pub struct PmbcResult {
    pub spikes: SpikeTrain,
    pub bounds: BoundState,
    pub fuzzy_rate: f64,
    pub explicit_history: Vec<f64>,
}

/// Bounds and reset traces as they stood after one tightening round.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub iteration: usize,
    pub s_up: SpikeTrain,
    pub s_low: SpikeTrain,
    /// Reset trace of `s_up` as used by this round's comparisons.
    pub m_up: Trace,
    /// Reset trace of `s_low` as used by this round's comparisons.
    pub m_low: Trace,
}

/// Kernel spectra and FFT plan shared by every channel of a batched solve.
///
/// `m_up_init`/`m_low_init` are the reset traces of the initial all-ones
/// and all-zeros bounds in closed form (a prefix sum of the kernel and a
/// constant), so the first iteration costs no transforms.
struct SolverKit {
    fft: FftPair,
    k_spec: Vec<Complex<f64>>,
    m_spec: Vec<Complex<f64>>,
    m_up_init: Vec<f64>,
    v_th: f64,
    u_th: f64,
}

/// Per-channel working memory, reused across solves on one thread.
struct SolveScratch {
    ws: FftWorkspace,
    k: Vec<f64>,
    m_up: Vec<f64>,
    m_low: Vec<f64>,
    staging: Vec<f64>,
}

impl SolverKit {
    fn new(params: &NeuronParams, len: usize) -> Result<Self> {
        params.validate()?;
        let m_kernel = match params.reset_mode {
            ResetMode::SoftReset => exp_kernel(params.tau, len)?,
            ResetMode::Refractory => refractory_kernel(params.tau, params.tau_r, len)?,
            other => {
                return Err(Error::UnsupportedMode(format!(
                    "boundary compression needs a soft reset family neuron, got {}",
                    other.name()
                )))
            }
        };
        let fft = FftPair::new(len);
        let mut ws = fft.workspace();
        let k_spec = match params.reset_mode {
            // The soft reset shares one kernel between k and m.
            ResetMode::SoftReset => fft.spectrum(m_kernel.taps(), &mut ws),
            _ => fft.spectrum(exp_kernel(params.tau, len)?.taps(), &mut ws),
        };
        let m_spec = match params.reset_mode {
            ResetMode::SoftReset => k_spec.clone(),
            _ => fft.spectrum(m_kernel.taps(), &mut ws),
        };
        // All-ones bound convolved with the shifted kernel is its prefix sum.
        let mut m_up_init = Vec::with_capacity(len);
        let mut acc = 0.0;
        for &tap in m_kernel.taps() {
            m_up_init.push(params.u_th * acc + params.v_th);
            acc += tap;
        }
        Ok(Self {
            fft,
            k_spec,
            m_spec,
            m_up_init,
            v_th: params.v_th,
            u_th: params.u_th,
        })
    }

    fn scratch(&self) -> SolveScratch {
        let len = self.fft.len();
        SolveScratch {
            ws: self.fft.workspace(),
            k: vec![0.0; len],
            m_up: vec![0.0; len],
            m_low: vec![0.0; len],
            staging: vec![0.0; len],
        }
    }

    /// Reset trace of a spike bound: `u_th * conv(shift_one(bits), kernel) + v_th`.
    fn reset_trace(
        &self,
        bits: &[u8],
        staging: &mut [f64],
        out: &mut [f64],
        ws: &mut FftWorkspace,
    ) {
        staging[0] = 0.0;
        for (dst, &s) in staging[1..].iter_mut().zip(bits) {
            *dst = f64::from(s);
        }
        self.fft.convolve(&self.m_spec, staging, out, ws);
        for v in out.iter_mut() {
            *v = self.u_th * *v + self.v_th;
        }
    }
}

fn solve_one(
    kit: &SolverKit,
    input: &Trace,
    max_iters: usize,
    mode: FireMode,
    scratch: &mut SolveScratch,
    mut recorder: Option<&mut Vec<IterationRecord>>,
) -> Result<PmbcResult> {
    if max_iters == 0 {
        return Err(Error::InvalidParam("max_iters must be >= 1".into()));
    }
    let len = kit.fft.len();
    if input.len() != len {
        return Err(Error::Shape(format!(
            "input length {} != solver length {len}",
            input.len()
        )));
    }

    let SolveScratch {
        ws,
        k,
        m_up,
        m_low,
        staging,
    } = scratch;
    kit.fft.convolve(&kit.k_spec, input.values(), k, ws);

    let mut s_up = vec![1u8; len];
    let mut s_low = vec![0u8; len];

    let mut decided = 0usize;
    let mut history = Vec::with_capacity(max_iters.min(len) + 1);
    history.push(0.0);
    let mut up_stale = true;
    let mut low_stale = true;
    let mut iterations_run = 0;

    for iteration in 1..=max_iters {
        if iteration == 1 {
            m_up.copy_from_slice(&kit.m_up_init);
            m_low.fill(kit.v_th);
        } else {
            if up_stale {
                kit.reset_trace(&s_up, staging, m_up, ws);
            }
            if low_stale {
                kit.reset_trace(&s_low, staging, m_low, ws);
            }
        }
        up_stale = false;
        low_stale = false;

        for t in 0..len {
            if s_low[t] != s_up[t] {
                if k[t] > m_up[t] {
                    s_low[t] = 1;
                    low_stale = true;
                    decided += 1;
                } else if k[t] < m_low[t] {
                    s_up[t] = 0;
                    up_stale = true;
                    decided += 1;
                }
            }
        }

        iterations_run = iteration;
        history.push(decided as f64 / len as f64);
        if let Some(rec) = recorder.as_deref_mut() {
            rec.push(IterationRecord {
                iteration,
                s_up: SpikeTrain::from_bits(s_up.clone())?,
                s_low: SpikeTrain::from_bits(s_low.clone())?,
                m_up: Trace::new(m_up.clone())?,
                m_low: Trace::new(m_low.clone())?,
            });
        }
        if !up_stale && !low_stale {
            break;
        }
    }

    let spikes = SpikeTrain::from_bits(fill_spikes(&s_up, &s_low, k, m_up, m_low, mode))?;
    let bounds = BoundState::new(
        SpikeTrain::from_bits(s_up)?,
        SpikeTrain::from_bits(s_low)?,
        iterations_run,
    )?;
    let fuzzy_rate = 1.0 - decided as f64 / len as f64;

    Ok(PmbcResult {
        spikes,
        bounds,
        fuzzy_rate,
        explicit_history: history,
    })
}

/// Resolves the spike train of one neuron channel in parallel over time.
///
/// Valid for [`ResetMode::SoftReset`] and [`ResetMode::Refractory`]; the
/// other modes have no input/spike decomposition to compress against.
pub fn pmbc_solve(
    params: &NeuronParams,
    input: &Trace,
    max_iters: usize,
    mode: FireMode,
) -> Result<PmbcResult> {
    let kit = SolverKit::new(params, input.len())?;
    solve_one(&kit, input, max_iters, mode, &mut kit.scratch(), None)
}

/// Like [`pmbc_solve`], additionally returning the bounds and reset traces
/// after every iteration, for diagnostics and plots.
pub fn pmbc_solve_traced(
    params: &NeuronParams,
    input: &Trace,
    max_iters: usize,
    mode: FireMode,
) -> Result<(PmbcResult, Vec<IterationRecord>)> {
    let kit = SolverKit::new(params, input.len())?;
    let mut records = Vec::new();
    let result = solve_one(
        &kit,
        input,
        max_iters,
        mode,
        &mut kit.scratch(),
        Some(&mut records),
    )?;
    Ok((result, records))
}

/// Solves many channels that share neuron parameters and length.
///
/// The kernel spectrum is computed once and shared read-only; channels run
/// in parallel. With [`FireMode::MeanRate`], each channel draws from its own
/// stream derived from the configured seed and the channel index, so results
/// do not depend on scheduling.
pub fn pmbc_solve_batch(
    params: &NeuronParams,
    inputs: &[Trace],
    max_iters: usize,
    mode: FireMode,
) -> Result<Vec<PmbcResult>> {
    let first = inputs
        .first()
        .ok_or_else(|| Error::Domain("batch must contain at least one channel".into()))?;
    let len = first.len();
    if let Some(bad) = inputs.iter().position(|t| t.len() != len) {
        return Err(Error::Shape(format!(
            "channel {bad} has length {}, expected {len}",
            inputs[bad].len()
        )));
    }
    let kit = SolverKit::new(params, len)?;
    inputs
        .par_iter()
        .enumerate()
        .map_init(
            || kit.scratch(),
            |scratch, (channel, input)| {
                solve_one(
                    &kit,
                    input,
                    max_iters,
                    channel_mode(mode, channel),
                    scratch,
                    None,
                )
            },
        )
        .collect()
}

pub(crate) fn channel_mode(mode: FireMode, channel: usize) -> FireMode {
    match mode {
        FireMode::MeanRate { seed } => FireMode::MeanRate {
            seed: seed.wrapping_add((channel as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        },
        other => other,
    }
}

/// Fills the undecided steps of a bound state according to the fire policy.
///
/// Decided steps are returned as-is; `k`, `m_up` and `m_low` are the traces
/// the final iteration compared against.
pub fn resolve_fuzzy(
    bounds: &BoundState,
    k: &Trace,
    m_up: &Trace,
    m_low: &Trace,
    mode: FireMode,
) -> Result<SpikeTrain> {
    let len = bounds.len();
    if k.len() != len || m_up.len() != len || m_low.len() != len {
        return Err(Error::Shape("trace lengths do not match the bounds".into()));
    }
    let up = bounds.s_up().bits();
    let low = bounds.s_low().bits();
    if up.iter().zip(low).any(|(&u, &l)| l > u) {
        return Err(Error::Invariant(
            "lower spike bound exceeds upper spike bound".into(),
        ));
    }
    SpikeTrain::from_bits(fill_spikes(
        up,
        low,
        k.values(),
        m_up.values(),
        m_low.values(),
        mode,
    ))
}

fn fill_spikes(
    up: &[u8],
    low: &[u8],
    k: &[f64],
    m_up: &[f64],
    m_low: &[f64],
    mode: FireMode,
) -> Vec<u8> {
    let len = up.len();
    // Decided steps carry their agreed value; undecided ones have low = 0.
    let mut out = low.to_vec();
    match mode {
        FireMode::AllZero => {}
        FireMode::AllOne => {
            for t in 0..len {
                if up[t] != low[t] {
                    out[t] = 1;
                }
            }
        }
        FireMode::MeanRate { seed } => {
            let mut decided = 0usize;
            let mut firing = 0usize;
            for t in 0..len {
                if up[t] == low[t] {
                    decided += 1;
                    firing += usize::from(low[t] == 1);
                }
            }
            let p = if decided == 0 {
                0.0
            } else {
                firing as f64 / decided as f64
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for t in 0..len {
                if up[t] != low[t] {
                    out[t] = u8::from(rng.gen::<f64>() < p);
                }
            }
        }
        FireMode::Midpoint => {
            for t in 0..len {
                if up[t] != low[t] {
                    out[t] = u8::from(k[t] > 0.5 * (m_up[t] + m_low[t]));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuron::serial_lif;

    fn trace(values: &[f64]) -> Trace {
        Trace::new(values.to_vec()).unwrap()
    }

    fn soft_params() -> NeuronParams {
        NeuronParams::soft_reset(0.5, 1.0, 1.0).unwrap()
    }

    #[test]
    fn resolves_the_hand_iterated_example_in_every_mode() {
        let input = trace(&[1.2, 0.8, 0.1, 1.0]);
        for mode in [
            FireMode::AllOne,
            FireMode::AllZero,
            FireMode::MeanRate { seed: 7 },
            FireMode::Midpoint,
        ] {
            let result = pmbc_solve(&soft_params(), &input, 4, mode).unwrap();
            assert_eq!(result.spikes.bits(), &[1, 0, 0, 1], "mode {}", mode.name());
            assert_eq!(result.fuzzy_rate, 0.0);
        }
    }

    #[test]
    fn zero_drive_resolves_in_the_first_iteration() {
        let result = pmbc_solve(
            &soft_params(),
            &Trace::zeros(16).unwrap(),
            8,
            FireMode::AllZero,
        )
        .unwrap();
        assert_eq!(result.spikes.bits(), &[0; 16]);
        assert_eq!(result.fuzzy_rate, 0.0);
        assert_eq!(result.explicit_history[0], 0.0);
        assert_eq!(result.explicit_history[1], 1.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        let input = trace(&[1.0, 0.5]);
        assert!(matches!(
            pmbc_solve(&soft_params(), &input, 0, FireMode::AllZero),
            Err(Error::InvalidParam(_))
        ));
        let no_reset = NeuronParams::no_reset(0.5, 1.0).unwrap();
        assert!(matches!(
            pmbc_solve(&no_reset, &input, 4, FireMode::AllZero),
            Err(Error::UnsupportedMode(_))
        ));
    }

    #[test]
    fn refractory_solve_matches_serial_oracle() {
        let params = NeuronParams::refractory(0.5, 0.5, 1.0, 1.0).unwrap();
        let input = trace(&[1.2, 0.8, 0.6, 1.0]);
        let (oracle, _) = serial_lif(&params, &input).unwrap();
        let result = pmbc_solve(&params, &input, 4, FireMode::AllZero).unwrap();
        assert_eq!(result.spikes, oracle);
        assert_eq!(result.fuzzy_rate, 0.0);
    }

    #[test]
    fn tight_budget_leaves_fuzzy_steps_on_slow_dynamics() {
        // Slow decay and a mid-range threshold keep the bounds wide after
        // one round; the full budget always closes them.
        let params = NeuronParams::soft_reset(0.9, 1.0, 0.5).unwrap();
        let values: Vec<f64> = (0..64).map(|t| 0.8 + 0.4 * ((t % 5) as f64 - 2.0)).collect();
        let input = trace(&values);
        let short = pmbc_solve(&params, &input, 1, FireMode::AllZero).unwrap();
        assert!(short.fuzzy_rate > 0.0);
        let full = pmbc_solve(&params, &input, input.len(), FireMode::AllZero).unwrap();
        assert_eq!(full.fuzzy_rate, 0.0);
    }

    #[test]
    fn continuing_a_converged_solve_changes_nothing() {
        let input = trace(&[1.2, 0.8, 0.1, 1.0, -0.4, 0.9, 2.1, 0.3]);
        let full = pmbc_solve(&soft_params(), &input, 64, FireMode::AllZero).unwrap();
        let n = full.bounds.iterations_run();
        assert!(n < 64, "expected early convergence, ran {n}");
        let again = pmbc_solve(&soft_params(), &input, n, FireMode::AllZero).unwrap();
        assert_eq!(again.bounds.s_up().bits(), full.bounds.s_up().bits());
        assert_eq!(again.bounds.s_low().bits(), full.bounds.s_low().bits());
        assert_eq!(again.spikes, full.spikes);
    }

    #[test]
    fn batch_matches_individual_solves() {
        let inputs: Vec<Trace> = (0..4)
            .map(|c| trace(&[1.2 + 0.1 * c as f64, 0.8, 0.1, 1.0, 0.2, -0.5, 1.4, 0.0]))
            .collect();
        let batch = pmbc_solve_batch(&soft_params(), &inputs, 8, FireMode::AllZero).unwrap();
        for (input, got) in inputs.iter().zip(&batch) {
            let single = pmbc_solve(&soft_params(), input, 8, FireMode::AllZero).unwrap();
            assert_eq!(got.spikes, single.spikes);
            assert_eq!(got.fuzzy_rate, single.fuzzy_rate);
        }
        let mismatched = vec![trace(&[1.0, 2.0]), trace(&[1.0, 2.0, 3.0])];
        assert!(pmbc_solve_batch(&soft_params(), &mismatched, 4, FireMode::AllZero).is_err());
    }

    #[test]
    fn fire_mode_fill_rules() {
        let s_up = SpikeTrain::from_bits(vec![1, 1, 1]).unwrap();
        let s_low = SpikeTrain::from_bits(vec![1, 0, 0]).unwrap();
        let bounds = BoundState::new(s_up, s_low, 1).unwrap();
        let k = trace(&[2.0, 1.6, 0.2]);
        let m_up = trace(&[2.0, 2.0, 2.0]);
        let m_low = trace(&[1.0, 1.0, 1.0]);

        let one = resolve_fuzzy(&bounds, &k, &m_up, &m_low, FireMode::AllOne).unwrap();
        assert_eq!(one.bits(), &[1, 1, 1]);
        let zero = resolve_fuzzy(&bounds, &k, &m_up, &m_low, FireMode::AllZero).unwrap();
        assert_eq!(zero.bits(), &[1, 0, 0]);
        // Midpoint is 1.5: k = 1.6 clears it, k = 0.2 does not.
        let mid = resolve_fuzzy(&bounds, &k, &m_up, &m_low, FireMode::Midpoint).unwrap();
        assert_eq!(mid.bits(), &[1, 1, 0]);
    }

    #[test]
    fn without_fuzzy_steps_every_mode_returns_the_bounds() {
        let decided = SpikeTrain::from_bits(vec![1, 0, 1, 0]).unwrap();
        let bounds = BoundState::new(decided.clone(), decided.clone(), 3).unwrap();
        let k = Trace::zeros(4).unwrap();
        for mode in [
            FireMode::AllOne,
            FireMode::AllZero,
            FireMode::MeanRate { seed: 1 },
            FireMode::Midpoint,
        ] {
            let out = resolve_fuzzy(&bounds, &k, &k, &k, mode).unwrap();
            assert_eq!(out, decided);
        }
    }

    #[test]
    fn mean_rate_is_seed_deterministic() {
        let s_up = SpikeTrain::ones(64).unwrap();
        let mut low = vec![0u8; 64];
        for (t, bit) in low.iter_mut().take(32).enumerate() {
            *bit = u8::from(t % 2 == 0);
        }
        // First 32 steps decided (half firing), rest fuzzy.
        let s_up_bits: Vec<u8> = (0..64).map(|t| if t < 32 { low[t] } else { 1 }).collect();
        let bounds = BoundState::new(
            SpikeTrain::from_bits(s_up_bits).unwrap(),
            SpikeTrain::from_bits(low).unwrap(),
            2,
        )
        .unwrap();
        let _ = s_up;
        let k = Trace::zeros(64).unwrap();
        let a = resolve_fuzzy(&bounds, &k, &k, &k, FireMode::MeanRate { seed: 9 }).unwrap();
        let b = resolve_fuzzy(&bounds, &k, &k, &k, FireMode::MeanRate { seed: 9 }).unwrap();
        assert_eq!(a, b);
        let rate = a.bits()[32..].iter().map(|&s| f64::from(s)).sum::<f64>() / 32.0;
        assert!(
            rate > 0.0 && rate < 1.0,
            "fill rate {rate} should be near 0.5"
        );
    }

    #[test]
    fn explicit_fraction_counts_agreement() {
        let fresh = BoundState::new(
            SpikeTrain::ones(4).unwrap(),
            SpikeTrain::zeros(4).unwrap(),
            0,
        )
        .unwrap();
        assert_eq!(explicit_fraction(&fresh), 0.0);
        let done = BoundState::new(
            SpikeTrain::ones(4).unwrap(),
            SpikeTrain::ones(4).unwrap(),
            5,
        )
        .unwrap();
        assert_eq!(explicit_fraction(&done), 1.0);
        let partial = BoundState::new(
            SpikeTrain::from_bits(vec![1, 0, 1, 1]).unwrap(),
            SpikeTrain::from_bits(vec![1, 0, 1, 0]).unwrap(),
            2,
        )
        .unwrap();
        assert_eq!(explicit_fraction(&partial), 0.75);
    }

    #[test]
    fn inconsistent_bounds_are_rejected() {
        let err = BoundState::new(
            SpikeTrain::from_bits(vec![0, 1]).unwrap(),
            SpikeTrain::from_bits(vec![1, 1]).unwrap(),
            0,
        );
        assert!(matches!(err, Err(Error::Invariant(_))));
    }

    #[test]
    fn traced_solve_reports_monotone_reset_traces() {
        let input = trace(&[0.9, 1.4, -0.2, 0.7, 1.1, 0.05, 0.6, 2.0]);
        let (_, records) =
            pmbc_solve_traced(&soft_params(), &input, 16, FireMode::AllZero).unwrap();
        assert!(!records.is_empty());
        for pair in records.windows(2) {
            for t in 0..input.len() {
                assert!(pair[1].m_up.values()[t] <= pair[0].m_up.values()[t] + 1e-12);
                assert!(pair[1].m_low.values()[t] >= pair[0].m_low.values()[t] - 1e-12);
            }
        }
    }
}
