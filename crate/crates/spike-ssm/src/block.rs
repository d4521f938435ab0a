//! One spiking state-space block: diagonal SSM per channel, spiking
//! activation resolved by boundary compression, and a position-wise gated
//! feature mix, with per-layer rate and timing statistics.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{ssm_kernel, FftPair, SsmLayerParams};
use crate::neuron::NeuronParams;
use crate::pmbc::{channel_mode, pmbc_solve, pmbc_solve_batch, FireMode};
use crate::trace::{SpikeTrain, Trace};

/// Normalization flavor carried by the block. Both active variants are
/// applied as plain standardization over the length dimension with the
/// statistics of the data itself; no trained gain or bias.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    None,
    LayerNormLike,
    BatchNormLike,
}

/// Position-wise linear projection to 2*d_out features followed by a gated
/// linear unit: the first half of the projection is multiplied by the
/// logistic sigmoid of the second half.
#[derive(Debug, Clone)]
pub struct MixParams {
    weight: Vec<Vec<f64>>,
    bias: Vec<f64>,
}

impl MixParams {
    /// `weight` has 2*d_out rows of d_in columns; `bias` has 2*d_out entries.
    pub fn new(weight: Vec<Vec<f64>>, bias: Vec<f64>) -> Result<Self> {
        let rows = weight.len();
        if rows == 0 || !rows.is_multiple_of(2) {
            return Err(Error::Shape(format!(
                "mix projection needs an even, positive row count, got {rows}"
            )));
        }
        let d_in = weight[0].len();
        if d_in == 0 {
            return Err(Error::Shape(
                "mix projection needs at least one input channel".into(),
            ));
        }
        if let Some(r) = weight.iter().position(|row| row.len() != d_in) {
            return Err(Error::Shape(format!(
                "mix weight row {r} has ragged length"
            )));
        }
        if bias.len() != rows {
            return Err(Error::Shape(format!(
                "mix bias length {} != row count {rows}",
                bias.len()
            )));
        }
        if weight
            .iter()
            .flatten()
            .chain(bias.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidParam("mix parameters must be finite".into()));
        }
        Ok(Self { weight, bias })
    }

    /// Both projection halves the identity, zero bias: the gated output is
    /// `x * sigmoid(x)` per channel.
    pub fn identity(d: usize) -> Result<Self> {
        let mut weight = vec![vec![0.0; d]; 2 * d];
        for (r, row) in weight.iter_mut().enumerate() {
            row[r % d] = 1.0;
        }
        Self::new(weight, vec![0.0; 2 * d])
    }

    pub fn d_in(&self) -> usize {
        self.weight[0].len()
    }

    pub fn d_out(&self) -> usize {
        self.weight.len() / 2
    }

    /// Applies the projection and gate position by position. Spike inputs
    /// are binary, so each projection column is either added or skipped.
    pub fn apply(&self, spikes: &[SpikeTrain]) -> Result<Vec<Trace>> {
        if spikes.len() != self.d_in() {
            return Err(Error::Shape(format!(
                "mix expects {} input channels, got {}",
                self.d_in(),
                spikes.len()
            )));
        }
        let len = spikes[0].len();
        if let Some(bad) = spikes.iter().position(|s| s.len() != len) {
            return Err(Error::Shape(format!(
                "spike channel {bad} has a different length"
            )));
        }
        let d_out = self.d_out();
        let mut out = vec![vec![0.0; len]; d_out];
        let mut proj = vec![0.0; 2 * d_out];
        for t in 0..len {
            proj.copy_from_slice(&self.bias);
            for (d, channel) in spikes.iter().enumerate() {
                if channel.bits()[t] == 1 {
                    for (p, row) in proj.iter_mut().zip(&self.weight) {
                        *p += row[d];
                    }
                }
            }
            for (o, channel) in out.iter_mut().enumerate() {
                channel[t] = proj[o] * sigmoid(proj[o + d_out]);
            }
        }
        out.into_iter().map(Trace::new).collect()
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Parameters of one block: a diagonal SSM per channel, the neuron(s)
/// behind the spiking activation, the feature mix, and normalization
/// placement (`pre_norm = false` applies it after the mix).
#[derive(Debug, Clone)]
pub struct BlockParams {
    pub ssm: Vec<SsmLayerParams>,
    /// One entry shared by all channels, or one entry per channel.
    pub neurons: Vec<NeuronParams>,
    pub mix: MixParams,
    pub norm: NormKind,
    pub pre_norm: bool,
}

impl BlockParams {
    pub fn new(ssm: Vec<SsmLayerParams>, neuron: NeuronParams, mix: MixParams) -> Result<Self> {
        let block = Self {
            ssm,
            neurons: vec![neuron],
            mix,
            norm: NormKind::None,
            pre_norm: false,
        };
        block.validate()?;
        Ok(block)
    }

    pub fn channels(&self) -> usize {
        self.ssm.len()
    }

    fn neuron_for(&self, channel: usize) -> &NeuronParams {
        if self.neurons.len() == 1 {
            &self.neurons[0]
        } else {
            &self.neurons[channel]
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ssm.is_empty() {
            return Err(Error::Shape("block needs at least one channel".into()));
        }
        for params in &self.ssm {
            params.validate()?;
        }
        if self.neurons.len() != 1 && self.neurons.len() != self.ssm.len() {
            return Err(Error::Shape(format!(
                "neuron params must be shared (1) or per channel ({}), got {}",
                self.ssm.len(),
                self.neurons.len()
            )));
        }
        for neuron in &self.neurons {
            neuron.validate()?;
        }
        if self.mix.d_in() != self.ssm.len() {
            return Err(Error::Shape(format!(
                "mix expects {} input channels but the block has {}",
                self.mix.d_in(),
                self.ssm.len()
            )));
        }
        Ok(())
    }
}

/// Wall-clock seconds spent in each stage of a block forward pass.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct StageTiming {
    pub ssm_seconds: f64,
    pub neuron_seconds: f64,
    pub mix_seconds: f64,
}

/// Spiking statistics of one block forward pass.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayerStats {
    pub spiking_rate_per_channel: Vec<f64>,
    pub spiking_rate_mean: f64,
    pub fuzzy_rate_mean: f64,
    pub timing: StageTiming,
}

/// Output of one block: the binary activation, the mixed features that feed
/// the next layer, and the stats. `residual_dropped` flags a skipped input
/// residual (channel counts disagreed).
#[derive(Debug, Clone)]
pub struct BlockOutput {
    pub spikes: Vec<SpikeTrain>,
    pub mixed: Vec<Trace>,
    pub stats: LayerStats,
    pub residual_dropped: bool,
}

/// Runs one block over a batch of channels.
///
/// Per channel: the input is convolved with the discretized SSM kernel, the
/// result drives the spiking activation (resolved by boundary compression),
/// and the binary spike vectors pass position-wise through the gated mix.
/// The block input is added back on top of the mix output when the channel
/// counts agree.
pub fn block_forward(
    params: &BlockParams,
    x: &[Trace],
    pmbc_iters: usize,
    mode: FireMode,
) -> Result<BlockOutput> {
    params.validate()?;
    let channels = params.channels();
    if x.len() != channels {
        return Err(Error::Shape(format!(
            "block has {channels} channels, input has {}",
            x.len()
        )));
    }
    let len = x[0].len();
    if let Some(bad) = x.iter().position(|t| t.len() != len) {
        return Err(Error::Shape(format!(
            "input channel {bad} has a different length"
        )));
    }

    let pre_normed;
    let x_work: &[Trace] = if params.pre_norm && params.norm != NormKind::None {
        pre_normed = standardize(x)?;
        &pre_normed
    } else {
        x
    };

    // SSM stage: one shared FFT plan, one kernel spectrum per channel.
    let ssm_start = Instant::now();
    let fft = FftPair::new(len);
    let driven: Vec<Trace> = x_work
        .par_iter()
        .zip(&params.ssm)
        .map(|(input, layer)| {
            let kernel = ssm_kernel(layer, len)?;
            let mut ws = fft.workspace();
            let spec = fft.spectrum(kernel.taps(), &mut ws);
            let mut out = vec![0.0; len];
            fft.convolve(&spec, input.values(), &mut out, &mut ws);
            Trace::new(out)
        })
        .collect::<Result<_>>()?;
    let ssm_seconds = ssm_start.elapsed().as_secs_f64();

    // Spiking activation.
    let neuron_start = Instant::now();
    let results = if params.neurons.len() == 1 {
        pmbc_solve_batch(&params.neurons[0], &driven, pmbc_iters, mode)?
    } else {
        driven
            .par_iter()
            .enumerate()
            .map(|(c, y)| pmbc_solve(params.neuron_for(c), y, pmbc_iters, channel_mode(mode, c)))
            .collect::<Result<_>>()?
    };
    let neuron_seconds = neuron_start.elapsed().as_secs_f64();

    let spikes: Vec<SpikeTrain> = results.iter().map(|r| r.spikes.clone()).collect();
    let fuzzy_rate_mean = results.iter().map(|r| r.fuzzy_rate).sum::<f64>() / channels as f64;

    // Feature mix, then the input residual where shapes allow it.
    let mix_start = Instant::now();
    let mut mixed = params.mix.apply(&spikes)?;
    let mut residual_dropped = false;
    if params.mix.d_out() == channels {
        for (out, input) in mixed.iter_mut().zip(x) {
            let summed: Vec<f64> = out
                .values()
                .iter()
                .zip(input.values())
                .map(|(o, i)| o + i)
                .collect();
            *out = Trace::new(summed)?;
        }
    } else {
        residual_dropped = true;
    }
    if !params.pre_norm && params.norm != NormKind::None {
        mixed = standardize(&mixed)?;
    }
    let mix_seconds = mix_start.elapsed().as_secs_f64();

    let spiking_rate_per_channel: Vec<f64> = spikes.iter().map(SpikeTrain::rate).collect();
    let spiking_rate_mean =
        spiking_rate_per_channel.iter().sum::<f64>() / spiking_rate_per_channel.len() as f64;

    Ok(BlockOutput {
        spikes,
        mixed,
        stats: LayerStats {
            spiking_rate_per_channel,
            spiking_rate_mean,
            fuzzy_rate_mean,
            timing: StageTiming {
                ssm_seconds,
                neuron_seconds,
                mix_seconds,
            },
        },
        residual_dropped,
    })
}

/// Runs blocks in sequence, feeding each layer's mixed output to the next.
pub fn run_stack(
    blocks: &[BlockParams],
    x: &[Trace],
    pmbc_iters: usize,
    mode: FireMode,
) -> Result<Vec<BlockOutput>> {
    if blocks.is_empty() {
        return Err(Error::Shape("stack needs at least one block".into()));
    }
    let mut outputs = Vec::with_capacity(blocks.len());
    let mut current: Vec<Trace> = x.to_vec();
    for block in blocks {
        let out = block_forward(block, &current, pmbc_iters, mode)?;
        current = out.mixed.clone();
        outputs.push(out);
    }
    Ok(outputs)
}

/// Per-layer spiking statistics of a block stack.
pub fn spiking_rate_profile(
    blocks: &[BlockParams],
    x: &[Trace],
    pmbc_iters: usize,
    mode: FireMode,
) -> Result<Vec<LayerStats>> {
    Ok(run_stack(blocks, x, pmbc_iters, mode)?
        .into_iter()
        .map(|out| out.stats)
        .collect())
}

/// Standardizes each channel over the length dimension.
fn standardize(x: &[Trace]) -> Result<Vec<Trace>> {
    const EPS: f64 = 1e-5;
    x.iter()
        .map(|channel| {
            let values = channel.values();
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            let scale = 1.0 / (var + EPS).sqrt();
            Trace::new(values.iter().map(|v| (v - mean) * scale).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuron::serial_lif;
    use num_complex::Complex;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn scalar_ssm() -> SsmLayerParams {
        SsmLayerParams::new(
            vec![Complex::new(-1.0, 0.0)],
            vec![Complex::new(1.0, 0.0)],
            vec![Complex::new(1.0, 0.0)],
            std::f64::consts::LN_2,
        )
        .unwrap()
    }

    #[test]
    fn zero_input_zero_bias_stays_dark() {
        let block = BlockParams::new(
            vec![SsmLayerParams::s4d_lin(4, 0.05).unwrap(); 3],
            NeuronParams::soft_reset(0.5, 1.0, 1.0).unwrap(),
            MixParams::identity(3).unwrap(),
        )
        .unwrap();
        let x = vec![Trace::zeros(32).unwrap(); 3];
        let out = block_forward(&block, &x, 3, FireMode::AllZero).unwrap();
        assert_eq!(out.stats.spiking_rate_mean, 0.0);
        for channel in &out.mixed {
            assert!(channel.values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn scalar_block_matches_the_serial_oracle() {
        // Impulse of 2 through the geometric kernel: y = (1.0, 0.5, 0.25, 0.125).
        // The soft-reset neuron at tau=0.5, v_th=0.9, u_th=1 fires once at t=1.
        let neuron = NeuronParams::soft_reset(0.5, 0.9, 1.0).unwrap();
        let block =
            BlockParams::new(vec![scalar_ssm()], neuron, MixParams::identity(1).unwrap()).unwrap();
        let x = vec![Trace::new(vec![2.0, 0.0, 0.0, 0.0]).unwrap()];
        let out = block_forward(&block, &x, 8, FireMode::AllZero).unwrap();

        let y = Trace::new(vec![1.0, 0.5, 0.25, 0.125]).unwrap();
        let (oracle, _) = serial_lif(&neuron, &y).unwrap();
        assert_eq!(oracle.bits(), &[1, 0, 0, 0]);
        assert_eq!(out.spikes[0], oracle);
    }

    #[test]
    fn identity_mix_gates_spikes_by_their_own_sigmoid() {
        let mix = MixParams::identity(2).unwrap();
        let spikes = vec![
            SpikeTrain::from_bits(vec![1, 0, 1, 1]).unwrap(),
            SpikeTrain::from_bits(vec![0, 0, 1, 0]).unwrap(),
        ];
        let out = mix.apply(&spikes).unwrap();
        for (channel, spike_channel) in out.iter().zip(&spikes) {
            for (&got, &s) in channel.values().iter().zip(spike_channel.bits()) {
                let s = f64::from(s);
                assert!((got - s * sigmoid(s)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn residual_is_dropped_when_widths_disagree() {
        let mix = MixParams::new(vec![vec![0.5, -0.5]; 6], vec![0.0; 6]).unwrap();
        assert_eq!(mix.d_out(), 3);
        let block = BlockParams::new(
            vec![SsmLayerParams::s4d_lin(2, 0.05).unwrap(); 2],
            NeuronParams::soft_reset(0.5, 1.0, 1.0).unwrap(),
            mix,
        )
        .unwrap();
        let x = vec![Trace::zeros(8).unwrap(); 2];
        let out = block_forward(&block, &x, 2, FireMode::AllZero).unwrap();
        assert!(out.residual_dropped);
        assert_eq!(out.mixed.len(), 3);
    }

    #[test]
    fn stack_profile_matches_manual_chaining() {
        let mut rng = StdRng::seed_from_u64(3);
        let block = BlockParams::new(
            vec![SsmLayerParams::s4d_lin(4, 0.08).unwrap(); 2],
            NeuronParams::soft_reset(0.3, 0.8, 0.5).unwrap(),
            MixParams::identity(2).unwrap(),
        )
        .unwrap();
        let x: Vec<Trace> = (0..2)
            .map(|_| Trace::new((0..64).map(|_| rng.gen_range(-1.5..1.5)).collect()).unwrap())
            .collect();

        let profile =
            spiking_rate_profile(&[block.clone(), block.clone()], &x, 3, FireMode::AllZero)
                .unwrap();
        let first = block_forward(&block, &x, 3, FireMode::AllZero).unwrap();
        let second = block_forward(&block, &first.mixed, 3, FireMode::AllZero).unwrap();

        assert_eq!(profile.len(), 2);
        assert_eq!(
            profile[0].spiking_rate_per_channel,
            first.stats.spiking_rate_per_channel
        );
        assert_eq!(
            profile[1].spiking_rate_per_channel,
            second.stats.spiking_rate_per_channel
        );
        for stats in &profile {
            assert!(stats.spiking_rate_mean >= 0.0 && stats.spiking_rate_mean <= 1.0);
            assert!(stats.fuzzy_rate_mean >= 0.0 && stats.fuzzy_rate_mean <= 1.0);
        }
    }

    #[test]
    fn forward_is_deterministic() {
        let mut rng = StdRng::seed_from_u64(17);
        let block = BlockParams::new(
            vec![SsmLayerParams::s4d_lin(4, 0.06).unwrap(); 4],
            NeuronParams::refractory(0.3, 0.6, 0.8, 0.9).unwrap(),
            MixParams::identity(4).unwrap(),
        )
        .unwrap();
        let x: Vec<Trace> = (0..4)
            .map(|_| Trace::new((0..128).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap())
            .collect();
        let a = block_forward(&block, &x, 2, FireMode::MeanRate { seed: 5 }).unwrap();
        let b = block_forward(&block, &x, 2, FireMode::MeanRate { seed: 5 }).unwrap();
        assert_eq!(a.spikes, b.spikes);
        for (ta, tb) in a.mixed.iter().zip(&b.mixed) {
            assert_eq!(ta.values(), tb.values());
        }
    }

    #[test]
    fn shape_errors_are_reported() {
        let block = BlockParams::new(
            vec![SsmLayerParams::s4d_lin(2, 0.05).unwrap(); 2],
            NeuronParams::soft_reset(0.5, 1.0, 1.0).unwrap(),
            MixParams::identity(2).unwrap(),
        )
        .unwrap();
        let too_few = vec![Trace::zeros(8).unwrap()];
        assert!(matches!(
            block_forward(&block, &too_few, 2, FireMode::AllZero),
            Err(Error::Shape(_))
        ));
        let ragged = vec![Trace::zeros(8).unwrap(), Trace::zeros(9).unwrap()];
        assert!(matches!(
            block_forward(&block, &ragged, 2, FireMode::AllZero),
            Err(Error::Shape(_))
        ));
    }
}
