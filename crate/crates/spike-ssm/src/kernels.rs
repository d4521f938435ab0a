//! Causal convolution machinery.
//!
//! A length-L signal convolved with a length-L kernel, truncated back to L
//! samples, is the workhorse of both the neuron decomposition and the
//! state-space layer. The fast path goes through a real FFT with zero
//! padding to at least 2L-1 samples so the circular product reproduces the
//! linear convolution exactly; [`causal_conv_direct`] keeps the quadratic
//! summation around as the independent reference.

use std::sync::Arc;

use num_complex::Complex;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};

use crate::error::{Error, Result};
use crate::trace::Trace;

/// Convolution kernel taps; index 0 is the weight on the current sample.
#[derive(Debug, Clone)]
pub struct Kernel {
    taps: Trace,
}

impl Kernel {
    pub fn new(taps: Trace) -> Self {
        Self { taps }
    }

    pub fn taps(&self) -> &[f64] {
        self.taps.values()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.taps.len()
    }
}

/// Geometric kernel `(tau^0, tau^1, ..., tau^{L-1})`.
pub fn exp_kernel(tau: f64, length: usize) -> Result<Kernel> {
    if !tau.is_finite() || tau <= 0.0 || tau >= 1.0 {
        return Err(Error::InvalidParam(format!(
            "exp kernel needs 0 < tau < 1, got {tau}"
        )));
    }
    if length == 0 {
        return Err(Error::InvalidParam("kernel length must be >= 1".into()));
    }
    let mut taps = Vec::with_capacity(length);
    let mut p = 1.0;
    for _ in 0..length {
        taps.push(p);
        p *= tau;
    }
    Ok(Kernel::new(Trace::new(taps)?))
}

/// Spike weight kernel of the refractory neuron:
/// `q_d = sum_{j=0..d} tau^j * tau_r^{d-j}`.
///
/// Evaluated through the recurrence `q_d = tau_r * q_{d-1} + tau^d`, which
/// reproduces the closed forms `(tau_r^{d+1} - tau^{d+1}) / (tau_r - tau)`,
/// `(d+1) tau^d` at `tau = tau_r`, and `tau^d` at `tau_r = 0` without the
/// cancellation the first form suffers when the decays nearly coincide.
pub fn refractory_kernel(tau: f64, tau_r: f64, length: usize) -> Result<Kernel> {
    if !tau.is_finite() || tau <= 0.0 || tau >= 1.0 {
        return Err(Error::InvalidParam(format!(
            "refractory kernel needs 0 < tau < 1, got {tau}"
        )));
    }
    if !tau_r.is_finite() || !(0.0..1.0).contains(&tau_r) {
        return Err(Error::InvalidParam(format!(
            "refractory kernel needs 0 <= tau_r < 1, got {tau_r}"
        )));
    }
    if length == 0 {
        return Err(Error::InvalidParam("kernel length must be >= 1".into()));
    }
    let mut taps = Vec::with_capacity(length);
    let mut q = 1.0;
    let mut tau_pow = 1.0;
    taps.push(q);
    for _ in 1..length {
        tau_pow *= tau;
        q = tau_r * q + tau_pow;
        taps.push(q);
    }
    Ok(Kernel::new(Trace::new(taps)?))
}

/// Delays a signal by one step, inserting a zero at the front.
///
/// Realizes the `t-1-i` offset of the reset sum: the spike-driven trace at
/// step t only sees spikes up to step t-1.
pub fn shift_one(signal: &Trace) -> Trace {
    let values = signal.values();
    let mut out = Vec::with_capacity(values.len());
    out.push(0.0);
    out.extend_from_slice(&values[..values.len() - 1]);
    Trace::new(out).expect("shifting a valid trace keeps it valid")
}

/// Causal linear convolution truncated to the common length L:
/// `out[t] = sum_{j=0..t} kernel[j] * signal[t-j]`.
///
/// Runs in O(L log L) through the padded-FFT plan. Signal and kernel must
/// have the same length.
pub fn causal_conv(signal: &Trace, kernel: &Kernel) -> Result<Trace> {
    ConvPlan::new(kernel).apply(signal)
}

/// Quadratic-time reference evaluation of [`causal_conv`].
pub fn causal_conv_direct(signal: &Trace, kernel: &Kernel) -> Result<Trace> {
    if signal.len() != kernel.len() {
        return Err(Error::Shape(format!(
            "signal length {} != kernel length {}",
            signal.len(),
            kernel.len()
        )));
    }
    let x = signal.values();
    let k = kernel.taps();
    let out = (0..x.len())
        .map(|t| (0..=t).map(|j| k[j] * x[t - j]).sum())
        .collect();
    Trace::new(out)
}

/// FFT plan pair for linear convolution at one sequence length.
///
/// The padded length is the next power of two at or above 2L-1, so the
/// circular product never wraps into the first L output samples.
pub(crate) struct FftPair {
    len: usize,
    fft_len: usize,
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
}

/// Reusable buffers for one thread of convolution work.
pub(crate) struct FftWorkspace {
    time: Vec<f64>,
    freq: Vec<Complex<f64>>,
    scratch_fwd: Vec<Complex<f64>>,
    scratch_inv: Vec<Complex<f64>>,
}

impl FftPair {
    pub(crate) fn new(len: usize) -> Self {
        assert!(len >= 1, "convolution length must be >= 1");
        let fft_len = (2 * len - 1).next_power_of_two().max(2);
        let mut planner = RealFftPlanner::<f64>::new();
        let r2c = planner.plan_fft_forward(fft_len);
        let c2r = planner.plan_fft_inverse(fft_len);
        Self {
            len,
            fft_len,
            r2c,
            c2r,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn workspace(&self) -> FftWorkspace {
        FftWorkspace {
            time: vec![0.0; self.fft_len],
            freq: vec![Complex::new(0.0, 0.0); self.fft_len / 2 + 1],
            scratch_fwd: vec![Complex::new(0.0, 0.0); self.r2c.get_scratch_len()],
            scratch_inv: vec![Complex::new(0.0, 0.0); self.c2r.get_scratch_len()],
        }
    }

    /// Forward transform of zero-padded taps, pre-scaled by 1/fft_len so the
    /// inverse pass needs no extra normalization.
    pub(crate) fn spectrum(&self, taps: &[f64], ws: &mut FftWorkspace) -> Vec<Complex<f64>> {
        assert_eq!(taps.len(), self.len);
        ws.time[..taps.len()].copy_from_slice(taps);
        ws.time[taps.len()..].fill(0.0);
        let mut spec = vec![Complex::new(0.0, 0.0); self.fft_len / 2 + 1];
        self.r2c
            .process_with_scratch(&mut ws.time, &mut spec, &mut ws.scratch_fwd)
            .expect("buffer sizes are managed by the plan");
        let scale = 1.0 / self.fft_len as f64;
        for v in &mut spec {
            *v *= scale;
        }
        spec
    }

    /// Writes the first L samples of `signal * kernel` into `out`.
    pub(crate) fn convolve(
        &self,
        kernel_spec: &[Complex<f64>],
        signal: &[f64],
        out: &mut [f64],
        ws: &mut FftWorkspace,
    ) {
        assert_eq!(signal.len(), self.len);
        assert_eq!(out.len(), self.len);
        ws.time[..signal.len()].copy_from_slice(signal);
        ws.time[signal.len()..].fill(0.0);
        self.r2c
            .process_with_scratch(&mut ws.time, &mut ws.freq, &mut ws.scratch_fwd)
            .expect("buffer sizes are managed by the plan");
        for (f, k) in ws.freq.iter_mut().zip(kernel_spec) {
            *f *= *k;
        }
        self.c2r
            .process_with_scratch(&mut ws.freq, &mut ws.time, &mut ws.scratch_inv)
            .expect("buffer sizes are managed by the plan");
        out.copy_from_slice(&ws.time[..self.len]);
    }
}

/// A kernel frozen into the frequency domain, ready to be applied to many
/// signals. The plan is read-only after construction and safe to share
/// across threads.
pub struct ConvPlan {
    pair: FftPair,
    kernel_spec: Vec<Complex<f64>>,
}

impl ConvPlan {
    pub fn new(kernel: &Kernel) -> Self {
        let pair = FftPair::new(kernel.len());
        let mut ws = pair.workspace();
        let kernel_spec = pair.spectrum(kernel.taps(), &mut ws);
        Self { pair, kernel_spec }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.pair.len()
    }

    pub fn apply(&self, signal: &Trace) -> Result<Trace> {
        if signal.len() != self.pair.len() {
            return Err(Error::Shape(format!(
                "signal length {} != kernel length {}",
                signal.len(),
                self.pair.len()
            )));
        }
        let mut ws = self.pair.workspace();
        let mut out = vec![0.0; self.pair.len()];
        self.pair
            .convolve(&self.kernel_spec, signal.values(), &mut out, &mut ws);
        Trace::new(out)
    }
}

/// Discretized diagonal entries (abar, bbar).
type Discretized = (Vec<Complex<f64>>, Vec<Complex<f64>>);

/// Diagonal state-space layer: `h_t = Abar h_{t-1} + Bbar x_t`,
/// `y_t = Re(c . h_t)`, with zero-order-hold discretization
/// `abar_n = exp(delta a_n)`, `bbar_n = (abar_n - 1) b_n / a_n`.
#[derive(Debug, Clone)]
pub struct SsmLayerParams {
    pub a: Vec<Complex<f64>>,
    pub b: Vec<Complex<f64>>,
    pub c: Vec<Complex<f64>>,
    pub delta: f64,
}

impl SsmLayerParams {
    pub fn new(
        a: Vec<Complex<f64>>,
        b: Vec<Complex<f64>>,
        c: Vec<Complex<f64>>,
        delta: f64,
    ) -> Result<Self> {
        let params = Self { a, b, c, delta };
        params.validate()?;
        Ok(params)
    }

    /// Diagonal initialization with poles `a_n = -1/2 + i pi n`, unit input
    /// weights and uniform 1/N read-out.
    pub fn s4d_lin(state_size: usize, delta: f64) -> Result<Self> {
        let a = (0..state_size)
            .map(|n| Complex::new(-0.5, std::f64::consts::PI * n as f64))
            .collect();
        let b = vec![Complex::new(1.0, 0.0); state_size];
        let c = vec![Complex::new(1.0 / state_size.max(1) as f64, 0.0); state_size];
        Self::new(a, b, c, delta)
    }

    pub fn state_size(&self) -> usize {
        self.a.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.is_empty() {
            return Err(Error::InvalidParam("state size must be >= 1".into()));
        }
        if self.b.len() != self.a.len() || self.c.len() != self.a.len() {
            return Err(Error::Shape(format!(
                "diagonal lengths disagree: a={}, b={}, c={}",
                self.a.len(),
                self.b.len(),
                self.c.len()
            )));
        }
        if !self.delta.is_finite() || self.delta <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "sample time delta must be positive, got {}",
                self.delta
            )));
        }
        for (n, v) in self.a.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidParam(format!("a[{n}] is not finite")));
            }
            if v.re >= 0.0 {
                return Err(Error::InvalidParam(format!(
                    "a[{n}] = {v} must have negative real part for stability"
                )));
            }
        }
        for (name, vs) in [("b", &self.b), ("c", &self.c)] {
            if let Some(n) = vs
                .iter()
                .position(|v| !v.re.is_finite() || !v.im.is_finite())
            {
                return Err(Error::InvalidParam(format!("{name}[{n}] is not finite")));
            }
        }
        Ok(())
    }

    /// Zero-order-hold discretization of the diagonal.
    fn discretize(&self) -> Result<Discretized> {
        let mut abar = Vec::with_capacity(self.a.len());
        let mut bbar = Vec::with_capacity(self.a.len());
        for (n, (&a_n, &b_n)) in self.a.iter().zip(&self.b).enumerate() {
            if a_n.norm_sqr() == 0.0 {
                return Err(Error::SingularDiscretization(format!(
                    "a[{n}] = 0 has no zero-order-hold inverse"
                )));
            }
            let ab = (a_n * self.delta).exp();
            abar.push(ab);
            bbar.push((ab - 1.0) * b_n / a_n);
        }
        Ok((abar, bbar))
    }
}

/// Unrolled convolution kernel of the discretized layer:
/// `taps[j] = Re(sum_n c_n abar_n^j bbar_n)`.
pub fn ssm_kernel(params: &SsmLayerParams, length: usize) -> Result<Kernel> {
    if length == 0 {
        return Err(Error::InvalidParam("kernel length must be >= 1".into()));
    }
    if params.b.len() != params.a.len() || params.c.len() != params.a.len() {
        return Err(Error::Shape("diagonal lengths disagree".into()));
    }
    let (abar, bbar) = params.discretize()?;
    let mut taps = vec![0.0; length];
    for n in 0..params.a.len() {
        let coef = params.c[n] * bbar[n];
        let mut pow = Complex::new(1.0, 0.0);
        for tap in taps.iter_mut() {
            *tap += (coef * pow).re;
            pow *= abar[n];
        }
    }
    Ok(Kernel::new(Trace::new(taps)?))
}

/// Step-by-step evaluation of the discretized recurrence with `h_{-1} = 0`.
///
/// Reference route for [`ssm_kernel`] + [`causal_conv`]; linear in N*L.
pub fn ssm_recurrent(params: &SsmLayerParams, signal: &Trace) -> Result<Trace> {
    let (abar, bbar) = params.discretize()?;
    if params.b.len() != params.a.len() || params.c.len() != params.a.len() {
        return Err(Error::Shape("diagonal lengths disagree".into()));
    }
    let mut h = vec![Complex::new(0.0, 0.0); params.a.len()];
    let mut out = Vec::with_capacity(signal.len());
    for &x in signal.values() {
        let mut y = 0.0;
        for n in 0..h.len() {
            h[n] = abar[n] * h[n] + bbar[n] * x;
            y += (params.c[n] * h[n]).re;
        }
        out.push(y);
    }
    Trace::new(out)
}
