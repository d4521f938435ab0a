//! Acceptance suite: the claims this crate stands on, each as one test
//! that prints a PASS/FAIL line (run with `--nocapture` to see them).
//!
//! The randomized checks draw every instance from fixed seeds, so a failure
//! is reproducible. Instances whose membrane grazes the threshold closer
//! than 1e-12 are resampled before solving; at an exact tie the serial
//! convention fires while the strict bound comparisons stay fuzzy, so
//! bitwise agreement is only defined away from ties.

use spike_ssm::harness::sampling::{gaussian_trace, rng_for};
use spike_ssm::harness::verify::sample_tie_free_instance;
use spike_ssm::harness::{estimate_energy, run_bench, BenchOptions, EnergyModel, LayerOps};
use spike_ssm::{
    causal_conv, causal_conv_direct, decompose, pmbc_solve, pmbc_solve_batch, serial_lif,
    ssm_kernel, ssm_recurrent, surrogate, surrogate_grad, FireMode, Kernel, NeuronParams,
    ResetMode, SsmLayerParams, Trace,
};

use std::sync::{Mutex, MutexGuard};

use num_complex::Complex;
use rand::Rng;

// Run the criteria one at a time so the wall-clock measurement is not
// polluted by sibling tests competing for cores.
static SERIAL: Mutex<()> = Mutex::new(());

fn serialized() -> MutexGuard<'static, ()> {
    SERIAL
        .lock()
        .unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn report(pass: bool, name: &str, detail: &str) {
    println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
}

#[test]
fn boundary_compression_matches_serial_oracle_bitwise() {
    let _serial = serialized();
    const CASES: usize = 1000;
    let lengths = [16usize, 64, 256];
    let mut passed = 0;
    let mut first_failure = None;
    for case in 0..CASES {
        let mode = if case % 2 == 0 {
            ResetMode::SoftReset
        } else {
            ResetMode::Refractory
        };
        let len = lengths[case % lengths.len()];
        let mut rng = rng_for(0xACC0, case as u64);
        let (params, input, oracle) = sample_tie_free_instance(&mut rng, mode, len).unwrap();
        let result = pmbc_solve(&params, &input, len, FireMode::AllZero).unwrap();
        if result.fuzzy_rate == 0.0 && result.spikes == oracle {
            passed += 1;
        } else if first_failure.is_none() {
            first_failure = Some((case, params));
        }
    }
    let pass = passed == CASES;
    report(
        pass,
        "oracle equivalence",
        &format!("{passed}/{CASES} instances bitwise equal with zero fuzzy rate"),
    );
    assert!(pass, "first failing case: {first_failure:?}");
}

#[test]
fn membrane_decomposition_identity_holds() {
    let _serial = serialized();
    const CASES: usize = 500;
    let mut worst = 0.0f64;
    for case in 0..CASES {
        let mut rng = rng_for(0xDEC0, case as u64);
        let mode = if case % 2 == 0 {
            ResetMode::SoftReset
        } else {
            ResetMode::Refractory
        };
        let len = rng.gen_range(2..=256);
        let params = spike_ssm::harness::sampling::sample_neuron(&mut rng, mode);
        let input = gaussian_trace(&mut rng, len);
        let (spikes, membrane) = serial_lif(&params, &input).unwrap();
        let parts = decompose(&params, &input, &spikes).unwrap();
        for t in 0..len {
            let rebuilt = parts.k.values()[t] - parts.m.values()[t] + params.v_th;
            let u = membrane.values()[t];
            let rel = (rebuilt - u).abs() / u.abs().max(rebuilt.abs()).max(1.0);
            worst = worst.max(rel);
        }
    }
    let pass = worst <= 1e-9;
    report(
        pass,
        "decomposition identity",
        &format!("max relative error {worst:.3e} over {CASES} instances (tolerance 1e-9)"),
    );
    assert!(pass);
}

#[test]
fn three_iterations_decide_most_spikes() {
    let _serial = serialized();
    const CHANNELS: usize = 64;
    const LENGTH: usize = 1024;
    let neuron = NeuronParams::soft_reset(0.1, 1.0, 1.0).unwrap();
    let inputs: Vec<Trace> = (0..CHANNELS)
        .map(|ch| gaussian_trace(&mut rng_for(0xC0F, ch as u64), LENGTH))
        .collect();
    let results = pmbc_solve_batch(&neuron, &inputs, 3, FireMode::AllZero).unwrap();
    let mean_explicit =
        results.iter().map(|r| 1.0 - r.fuzzy_rate).sum::<f64>() / results.len() as f64;
    let pass = mean_explicit >= 0.95;
    report(
        pass,
        "fast convergence",
        &format!("mean explicit fraction {mean_explicit:.4} at 3 iterations (threshold 0.95)"),
    );
    assert!(pass);
}

#[test]
fn batched_solver_outruns_serial_and_gains_with_length() {
    let _serial = serialized();
    let opts = BenchOptions {
        seed: 0xBE7C,
        lengths: vec![1024, 8192],
        channels: 64,
        iters: 3,
        mode: FireMode::AllZero,
        repeats: 5,
        warmup: 2,
        neuron: NeuronParams::soft_reset(0.1, 1.0, 1.0).unwrap(),
    };
    let bench = run_bench(&opts).unwrap();
    let short = &bench.rows[0];
    let long = &bench.rows[1];
    let pass = short.speedup > 1.0 && long.speedup > short.speedup;
    report(
        pass,
        "speedup trend",
        &format!(
            "speedup {:.3}x at L=1024 (need > 1) and {:.3}x at L=8192 (need > the former) on {} threads",
            short.speedup, long.speedup, bench.pmbc_threads
        ),
    );
    assert!(
        pass,
        "serial {:.3} ms vs batched {:.3} ms at L=1024; serial {:.3} ms vs batched {:.3} ms at L=8192",
        short.serial_seconds * 1e3,
        short.pmbc_seconds * 1e3,
        long.serial_seconds * 1e3,
        long.pmbc_seconds * 1e3,
    );
}

#[test]
fn fft_convolution_matches_direct_summation() {
    let _serial = serialized();
    const CASES: usize = 200;
    let lengths = [16usize, 64, 256, 1024, 4096];
    let mut worst = 0.0f64;
    for case in 0..CASES {
        let mut rng = rng_for(0xFF7, case as u64);
        let len = lengths[case % lengths.len()];
        let signal = Trace::new((0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let kernel =
            Kernel::new(Trace::new((0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap());
        let fast = causal_conv(&signal, &kernel).unwrap();
        let slow = causal_conv_direct(&signal, &kernel).unwrap();
        for (a, b) in fast.values().iter().zip(slow.values()) {
            worst = worst.max((a - b).abs());
        }
    }
    let pass = worst <= 1e-8;
    report(
        pass,
        "fft correctness",
        &format!(
            "max absolute deviation {worst:.3e} over {CASES} pairs up to L=4096 (tolerance 1e-8)"
        ),
    );
    assert!(pass);
}

#[test]
fn state_space_kernel_matches_recurrence() {
    let _serial = serialized();
    const CASES: usize = 100;
    let mut worst = 0.0f64;
    for case in 0..CASES {
        let mut rng = rng_for(0x55B, case as u64);
        let n = rng.gen_range(1..=16);
        let len = rng.gen_range(2..=128);
        let delta = rng.gen_range(0.001..0.1);
        let params = SsmLayerParams::new(
            (0..n)
                .map(|_| Complex::new(rng.gen_range(-2.0..-0.1), rng.gen_range(-20.0..20.0)))
                .collect(),
            (0..n)
                .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
            (0..n)
                .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
            delta,
        )
        .unwrap();
        let signal = gaussian_trace(&mut rng, len);
        let viaconv = causal_conv(&signal, &ssm_kernel(&params, len).unwrap()).unwrap();
        let viarec = ssm_recurrent(&params, &signal).unwrap();
        for (a, b) in viaconv.values().iter().zip(viarec.values()) {
            let rel = (a - b).abs() / a.abs().max(b.abs()).max(1.0);
            worst = worst.max(rel);
        }
    }
    let pass = worst <= 1e-6;
    report(
        pass,
        "kernel-recurrence equivalence",
        &format!("max relative error {worst:.3e} over {CASES} diagonal systems (tolerance 1e-6)"),
    );
    assert!(pass);
}

#[test]
fn energy_totals_match_reference_arithmetic() {
    let _serial = serialized();
    let model = EnergyModel::default();
    let dense = estimate_energy(
        &[LayerOps {
            dense_ops: 275e9,
            spiking_rate: 1.0,
        }],
        &model,
    )
    .unwrap();
    let mac_mj = dense.mac_energy_j * 1e3;
    let mac_ok = (mac_mj - 1265.0).abs() / 1265.0 <= 1e-3;

    let gated = estimate_energy(
        &[LayerOps {
            dense_ops: 72.66e9,
            spiking_rate: 1.0,
        }],
        &model,
    )
    .unwrap();
    let ac_mj = gated.ac_energy_j * 1e3;
    let ac_ok = (ac_mj - 65.40).abs() / 65.40 <= 1e-3;

    let pass = mac_ok && ac_ok;
    report(
        pass,
        "energy reproduction",
        &format!("275 G MAC -> {mac_mj:.2} mJ (want 1265 within 0.1%); 72.66 G AC -> {ac_mj:.3} mJ (want 65.40 within 0.1%)"),
    );
    assert!(pass);
}

#[test]
fn surrogate_gradient_matches_finite_differences() {
    let _serial = serialized();
    const POINTS: usize = 100;
    const H: f64 = 1e-6;
    let alpha = 1.0;
    let mut rng = rng_for(0x96AD, 0);
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < POINTS {
        let x: f64 = rng.gen_range(-3.0..3.0);
        // Skip the kinks at |x| = 1/alpha, where the derivative jumps.
        if (x.abs() - 1.0 / alpha).abs() < 1e-3 {
            continue;
        }
        let fd = (surrogate(x + H, alpha).unwrap() - surrogate(x - H, alpha).unwrap()) / (2.0 * H);
        let grad = surrogate_grad(x, alpha).unwrap();
        worst = worst.max((fd - grad).abs());
        checked += 1;
    }
    let pass = worst <= 1e-4;
    report(
        pass,
        "surrogate gradient",
        &format!("max |finite difference - gradient| = {worst:.3e} over {POINTS} points (tolerance 1e-4)"),
    );
    assert!(pass);
}
