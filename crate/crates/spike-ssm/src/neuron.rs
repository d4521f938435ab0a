//! Serial reference implementations of the leaky integrate-and-fire family.
//!
//! Everything here steps through time explicitly, one sample after the next.
//! These routines are the ground truth that the parallel boundary solver in
//! [`crate::pmbc`] is checked against, so they favor clarity over speed.
//!
//! Discrete dynamics (soft reset, decoupled reset magnitude `u_th`):
//!
//! ```text
//! u_t = tau * u_{t-1} - s_{t-1} * u_th + I_t      s_t = H(u_t - v_th)
//! ```
//!
//! with `s_0 = u_0 = 0`. The refractory variant replaces the reset term with
//! a sliding pulse `R_t = tau_r * R_{t-1} + s_{t-1}` that keeps suppressing
//! the membrane for several steps after a spike.

use crate::error::{Error, Result};
use crate::trace::{SpikeTrain, Trace};

/// What happens to the membrane potential after a spike.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResetMode {
    /// Integrate and fire without any reset.
    NoReset,
    /// Overwrite the potential with `reset_to` after a spike.
    HardReset { reset_to: f64 },
    /// Subtract the reset magnitude `u_th` on the step after a spike.
    SoftReset,
    /// Soft reset driven by a decaying refractory pulse.
    Refractory,
}

impl ResetMode {
    pub fn name(&self) -> &'static str {
        match self {
            ResetMode::NoReset => "no_reset",
            ResetMode::HardReset { .. } => "hard_reset",
            ResetMode::SoftReset => "soft_reset",
            ResetMode::Refractory => "refractory",
        }
    }
}

/// Neuron hyperparameters shared by all reset variants.
///
/// `tau` is the discrete-time membrane decay, `tau_r` the refractory decay
/// (ignored outside [`ResetMode::Refractory`]), `v_th` the firing threshold
/// and `u_th` the reset/refractory magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeuronParams {
    pub tau: f64,
    pub tau_r: f64,
    pub v_th: f64,
    pub u_th: f64,
    pub reset_mode: ResetMode,
}

impl NeuronParams {
    pub fn new(tau: f64, tau_r: f64, v_th: f64, u_th: f64, reset_mode: ResetMode) -> Result<Self> {
        let params = Self {
            tau,
            tau_r,
            v_th,
            u_th,
            reset_mode,
        };
        params.validate()?;
        Ok(params)
    }

    /// Soft-reset neuron; `tau_r` is fixed to 0.
    pub fn soft_reset(tau: f64, v_th: f64, u_th: f64) -> Result<Self> {
        Self::new(tau, 0.0, v_th, u_th, ResetMode::SoftReset)
    }

    pub fn refractory(tau: f64, tau_r: f64, v_th: f64, u_th: f64) -> Result<Self> {
        Self::new(tau, tau_r, v_th, u_th, ResetMode::Refractory)
    }

    pub fn no_reset(tau: f64, v_th: f64) -> Result<Self> {
        Self::new(tau, 0.0, v_th, 0.0, ResetMode::NoReset)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.tau.is_finite() || self.tau <= 0.0 || self.tau >= 1.0 {
            return Err(Error::InvalidParam(format!(
                "tau must satisfy 0 < tau < 1, got {}",
                self.tau
            )));
        }
        if !self.tau_r.is_finite() || self.tau_r < 0.0 || self.tau_r >= 1.0 {
            return Err(Error::InvalidParam(format!(
                "tau_r must satisfy 0 <= tau_r < 1, got {}",
                self.tau_r
            )));
        }
        if !self.v_th.is_finite() || self.v_th <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "v_th must be positive, got {}",
                self.v_th
            )));
        }
        if !self.u_th.is_finite() || self.u_th < 0.0 {
            return Err(Error::InvalidParam(format!(
                "u_th must be non-negative, got {}",
                self.u_th
            )));
        }
        if let ResetMode::HardReset { reset_to } = self.reset_mode {
            if !reset_to.is_finite() {
                return Err(Error::InvalidParam(
                    "hard reset value must be finite".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Fires iff the membrane potential reaches the threshold: `u - v_th >= 0`.
#[inline]
fn fire(u: f64, v_th: f64) -> u8 {
    u8::from(u - v_th >= 0.0)
}

/// Runs the neuron dynamics by strict time-step iteration.
///
/// Returns the spike train and the membrane potential trace. The recorded
/// potential at step t is the value the threshold comparison sees; resets
/// take effect on the following step (hard reset excepted, where the
/// overwritten value carries into the next step's decay).
pub fn serial_lif(params: &NeuronParams, input: &Trace) -> Result<(SpikeTrain, Trace)> {
    params.validate()?;
    let drive = input.values();
    let mut spikes = Vec::with_capacity(drive.len());
    let mut membrane = Vec::with_capacity(drive.len());

    match params.reset_mode {
        ResetMode::NoReset => {
            let mut u = 0.0;
            for &i_t in drive {
                u = params.tau * u + i_t;
                membrane.push(u);
                spikes.push(fire(u, params.v_th));
            }
        }
        ResetMode::HardReset { reset_to } => {
            let mut carried = 0.0;
            for &i_t in drive {
                let u = params.tau * carried + i_t;
                let s = fire(u, params.v_th);
                membrane.push(u);
                spikes.push(s);
                carried = if s == 1 { reset_to } else { u };
            }
        }
        ResetMode::SoftReset => {
            let mut u = 0.0;
            let mut s_prev = 0.0;
            for &i_t in drive {
                u = params.tau * u - s_prev * params.u_th + i_t;
                let s = fire(u, params.v_th);
                membrane.push(u);
                spikes.push(s);
                s_prev = f64::from(s);
            }
        }
        ResetMode::Refractory => {
            // Same expression shape as the soft reset, so tau_r = 0 (where
            // pulse == s_prev exactly) reproduces it bit for bit.
            let mut u = 0.0;
            let mut pulse = 0.0;
            let mut s_prev = 0.0;
            for &i_t in drive {
                pulse = params.tau_r * pulse + s_prev;
                u = params.tau * u - pulse * params.u_th + i_t;
                let s = fire(u, params.v_th);
                membrane.push(u);
                spikes.push(s);
                s_prev = f64::from(s);
            }
        }
    }

    Ok((SpikeTrain::from_bits(spikes)?, Trace::new(membrane)?))
}

/// The input-driven and spike-driven halves of the membrane potential:
/// `u_t = k_t - m_t + v_th`, with `k` independent of the spikes and `m`
/// independent of the input.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub k: Trace,
    pub m: Trace,
}

/// Splits the membrane potential of a soft-reset or refractory neuron into
/// its `k`/`m` parts by direct summation of the defining series.
///
/// `k_t = sum_{i<=t} tau^{t-i} I_i` and
/// `m_t = u_th * sum_{i<t} w_{t-1-i} s_i + v_th`, where the weight `w_d` is
/// `tau^d` for the soft reset and `sum_{j<=d} tau^j tau_r^{d-j}` for the
/// refractory neuron. Quadratic in the sequence length; this is the
/// reference route, kept free of any transform machinery.
pub fn decompose(
    params: &NeuronParams,
    input: &Trace,
    spikes: &SpikeTrain,
) -> Result<Decomposition> {
    params.validate()?;
    match params.reset_mode {
        ResetMode::SoftReset | ResetMode::Refractory => {}
        other => {
            return Err(Error::UnsupportedMode(format!(
                "decomposition is only defined for the soft reset family, got {}",
                other.name()
            )))
        }
    }
    if spikes.len() != input.len() {
        return Err(Error::Shape(format!(
            "input length {} != spike train length {}",
            input.len(),
            spikes.len()
        )));
    }

    let len = input.len();
    let drive = input.values();
    let bits = spikes.bits();
    let tau_pow = powers(params.tau, len);
    let weights = spike_weights(params, len);

    let mut k = Vec::with_capacity(len);
    let mut m = Vec::with_capacity(len);
    for t in 0..len {
        let mut k_t = 0.0;
        for i in 0..=t {
            k_t += tau_pow[t - i] * drive[i];
        }
        k.push(k_t);

        let mut reset_sum = 0.0;
        for i in 0..t {
            if bits[i] == 1 {
                reset_sum += weights[t - 1 - i];
            }
        }
        m.push(params.u_th * reset_sum + params.v_th);
    }

    Ok(Decomposition {
        k: Trace::new(k)?,
        m: Trace::new(m)?,
    })
}

fn powers(x: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut p = 1.0;
    for _ in 0..len {
        out.push(p);
        p *= x;
    }
    out
}

/// Weight of a spike `d` steps in the past on today's reset term, evaluated
/// from the defining sums.
fn spike_weights(params: &NeuronParams, len: usize) -> Vec<f64> {
    match params.reset_mode {
        ResetMode::SoftReset => powers(params.tau, len),
        ResetMode::Refractory => {
            let tau_pow = powers(params.tau, len);
            let taur_pow = powers(params.tau_r, len);
            (0..len)
                .map(|d| (0..=d).map(|j| tau_pow[j] * taur_pow[d - j]).sum())
                .collect()
        }
        _ => unreachable!("checked by caller"),
    }
}

/// Piecewise quadratic spiking function used as a smooth stand-in for the
/// Heaviside step during training.
pub fn surrogate(x: f64, alpha: f64) -> Result<f64> {
    check_surrogate_args(x, alpha)?;
    let inv = 1.0 / alpha;
    Ok(if x < -inv {
        0.0
    } else if x > inv {
        1.0
    } else {
        -0.5 * alpha * alpha * x.abs() * x + alpha * x + 0.5
    })
}

/// Derivative of [`surrogate`]: a triangular bump of height `alpha` on
/// `|x| <= 1/alpha`, zero outside.
pub fn surrogate_grad(x: f64, alpha: f64) -> Result<f64> {
    check_surrogate_args(x, alpha)?;
    Ok(if x.abs() > 1.0 / alpha {
        0.0
    } else {
        -alpha * alpha * x.abs() + alpha
    })
}

fn check_surrogate_args(x: f64, alpha: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Domain(format!(
            "surrogate input must be finite, got {x}"
        )));
    }
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(values: &[f64]) -> Trace {
        Trace::new(values.to_vec()).unwrap()
    }

    #[test]
    fn soft_reset_hand_iteration() {
        // tau=0.5, v_th=1, u_th=1: u = (1.2, 0.4, 0.3, 1.15), spikes at t=1 and t=4.
        let params = NeuronParams::soft_reset(0.5, 1.0, 1.0).unwrap();
        let (spikes, membrane) = serial_lif(&params, &trace(&[1.2, 0.8, 0.1, 1.0])).unwrap();
        assert_eq!(spikes.bits(), &[1, 0, 0, 1]);
        for (got, want) in membrane.values().iter().zip([1.2, 0.4, 0.3, 1.15]) {
            assert!((got - want).abs() < 1e-12, "membrane {got} != {want}");
        }
    }

    #[test]
    fn zero_drive_stays_silent_in_every_mode() {
        let zeros = Trace::zeros(8).unwrap();
        for mode in [
            ResetMode::NoReset,
            ResetMode::HardReset { reset_to: 0.0 },
            ResetMode::SoftReset,
            ResetMode::Refractory,
        ] {
            let params = NeuronParams::new(0.5, 0.5, 1.0, 1.0, mode).unwrap();
            let (spikes, membrane) = serial_lif(&params, &zeros).unwrap();
            assert_eq!(spikes.bits(), &[0; 8], "mode {}", mode.name());
            assert!(membrane.values().iter().all(|&u| u == 0.0));
        }
    }

    #[test]
    fn refractory_hand_iteration() {
        // tau=0.5, tau_r=0.5: pulse R = (0, 1, 0.5, 0.25), u = (1.2, 0.4, 0.3, 0.9).
        let params = NeuronParams::refractory(0.5, 0.5, 1.0, 1.0).unwrap();
        let (spikes, membrane) = serial_lif(&params, &trace(&[1.2, 0.8, 0.6, 1.0])).unwrap();
        assert_eq!(spikes.bits(), &[1, 0, 0, 0]);
        for (got, want) in membrane.values().iter().zip([1.2, 0.4, 0.3, 0.9]) {
            assert!((got - want).abs() < 1e-12, "membrane {got} != {want}");
        }
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(Trace::new(vec![]).is_err());
    }

    #[test]
    fn invalid_params_are_rejected() {
        assert!(NeuronParams::soft_reset(0.0, 1.0, 1.0).is_err());
        assert!(NeuronParams::soft_reset(1.0, 1.0, 1.0).is_err());
        assert!(NeuronParams::soft_reset(0.5, 0.0, 1.0).is_err());
        assert!(NeuronParams::soft_reset(0.5, 1.0, -0.1).is_err());
        assert!(NeuronParams::refractory(0.5, 1.0, 1.0, 1.0).is_err());
        assert!(NeuronParams::refractory(0.5, -0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn decompose_first_step_and_all_zero_spikes() {
        // At t=1 the split is k_1 = I_1, m_1 = v_th for any parameters.
        let params = NeuronParams::soft_reset(0.3, 0.7, 1.3).unwrap();
        let input = trace(&[0.42, -0.1, 0.9]);
        let spikes = SpikeTrain::zeros(3).unwrap();
        let d = decompose(&params, &input, &spikes).unwrap();
        assert!((d.k.values()[0] - 0.42).abs() < 1e-15);
        assert_eq!(d.m.values()[0], 0.7);
        // With no spikes the reset sum is empty, so m_t = v_th everywhere.
        assert!(d.m.values().iter().all(|&m| m == 0.7));
    }

    #[test]
    fn decompose_matches_hand_substitution() {
        // I = (1.2, 0.8), s_1 = 1: k_2 = 0.5*1.2 + 0.8 = 1.4, m_2 = 1 + 1 = 2,
        // so u_2 = k_2 - m_2 + v_th = 0.4, in agreement with the serial run.
        let params = NeuronParams::soft_reset(0.5, 1.0, 1.0).unwrap();
        let input = trace(&[1.2, 0.8]);
        let (spikes, membrane) = serial_lif(&params, &input).unwrap();
        assert_eq!(spikes.bits()[0], 1);
        let d = decompose(&params, &input, &spikes).unwrap();
        assert!((d.k.values()[1] - 1.4).abs() < 1e-12);
        assert!((d.m.values()[1] - 2.0).abs() < 1e-12);
        let rebuilt = d.k.values()[1] - d.m.values()[1] + params.v_th;
        assert!((rebuilt - membrane.values()[1]).abs() < 1e-12);
    }

    #[test]
    fn decompose_rejects_unsupported_modes() {
        let input = trace(&[1.0, 0.5]);
        let spikes = SpikeTrain::zeros(2).unwrap();
        for mode in [ResetMode::NoReset, ResetMode::HardReset { reset_to: 0.0 }] {
            let params = NeuronParams::new(0.5, 0.0, 1.0, 1.0, mode).unwrap();
            assert!(matches!(
                decompose(&params, &input, &spikes),
                Err(Error::UnsupportedMode(_))
            ));
        }
    }

    #[test]
    fn surrogate_reference_points() {
        assert_eq!(surrogate(0.0, 1.0).unwrap(), 0.5);
        assert_eq!(surrogate_grad(0.0, 1.0).unwrap(), 1.0);
        assert_eq!(surrogate(2.0, 1.0).unwrap(), 1.0);
        assert_eq!(surrogate_grad(2.0, 1.0).unwrap(), 0.0);
        assert_eq!(surrogate(-2.0, 1.0).unwrap(), 0.0);
        // Continuity at the kinks.
        assert!((surrogate(1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(surrogate(-1.0, 1.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn surrogate_rejects_bad_arguments() {
        assert!(surrogate(f64::NAN, 1.0).is_err());
        assert!(surrogate(0.0, 0.0).is_err());
        assert!(surrogate_grad(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn hard_reset_overwrites_the_potential() {
        let params =
            NeuronParams::new(0.5, 0.0, 1.0, 0.0, ResetMode::HardReset { reset_to: 0.25 }).unwrap();
        let (spikes, membrane) = serial_lif(&params, &trace(&[1.0, 0.0, 0.0])).unwrap();
        assert_eq!(spikes.bits(), &[1, 0, 0]);
        // After the spike the carried value is 0.25, so u_2 = 0.125.
        assert!((membrane.values()[1] - 0.125).abs() < 1e-15);
    }
}
