//! Command-line harness. The heavy lifting lives in the library; this
//! binary parses flags, merges them over the JSON config, dispatches, and
//! renders the report.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or config error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spike_ssm::harness::config::{FireKind, HarnessConfig, OutputFormat};
use spike_ssm::harness::demo::DemoOptions;
use spike_ssm::harness::report::{render, write_out, Report};
use spike_ssm::harness::{
    estimate_energy, run_bench, run_converge, run_demo, run_verify, BenchOptions, ConvergeOptions,
    EnergyModel, LayerOps, VerifyOptions,
};
use spike_ssm::{Error, Result};

#[derive(Parser)]
#[command(
    name = "spike-ssm",
    about = "Parallel spike-train resolution, benchmarks and energy accounting",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized equivalence and soundness suites.
    Verify(CommonArgs),
    /// Time the serial oracle against the batched parallel solver.
    Bench(CommonArgs),
    /// Explicit spiking fraction per iteration budget.
    Converge(CommonArgs),
    /// MAC/AC operation counts and energy.
    Energy(EnergyArgs),
    /// Forward a small block stack and report per-layer rates.
    Demo(DemoArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed for all randomness.
    #[arg(long)]
    seed: Option<u64>,
    /// Report encoding.
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sequence length(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    length: Option<Vec<usize>>,
    /// Iteration budget of the parallel solver.
    #[arg(long)]
    iters: Option<usize>,
    /// Policy for spikes still fuzzy at the budget.
    #[arg(long, value_enum)]
    fire_mode: Option<FireModeArg>,
    /// Membrane decay in (0, 1).
    #[arg(long)]
    tau: Option<f64>,
    /// Refractory decay in [0, 1).
    #[arg(long)]
    tau_r: Option<f64>,
    /// Firing threshold.
    #[arg(long)]
    v_th: Option<f64>,
    /// Reset / refractory magnitude.
    #[arg(long)]
    u_th: Option<f64>,
}

#[derive(Args)]
struct EnergyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Dense operation count per layer, comma separated.
    #[arg(long, value_delimiter = ',')]
    dense_ops: Option<Vec<f64>>,
    /// Input spiking rate per layer, comma separated (defaults to 1.0).
    #[arg(long, value_delimiter = ',')]
    rates: Option<Vec<f64>>,
    /// Derive ops and rates from a seeded demo-stack run instead.
    #[arg(long, conflicts_with_all = ["dense_ops", "rates"])]
    from_demo: bool,
}

#[derive(Args)]
struct DemoArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Export per-iteration bound traces of layer 0, channel 0 as CSV.
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for OutputFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum FireModeArg {
    #[value(name = "allone")]
    AllOne,
    #[value(name = "allzero")]
    AllZero,
    #[value(name = "meanrate")]
    MeanRate,
    #[value(name = "midpoint")]
    Midpoint,
}

impl From<FireModeArg> for FireKind {
    fn from(value: FireModeArg) -> Self {
        match value {
            FireModeArg::AllOne => FireKind::AllOne,
            FireModeArg::AllZero => FireKind::AllZero,
            FireModeArg::MeanRate => FireKind::MeanRate,
            FireModeArg::Midpoint => FireKind::Midpoint,
        }
    }
}

fn load_config(args: &CommonArgs) -> Result<HarnessConfig> {
    let mut config = match &args.config {
        Some(path) => HarnessConfig::load(path)?,
        None => HarnessConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(lengths) = &args.length {
        config.bench.lengths = lengths.clone();
    }
    if let Some(iters) = args.iters {
        config.bench.iters = iters;
    }
    if let Some(mode) = args.fire_mode {
        config.bench.fire_mode = mode.into();
    }
    if let Some(tau) = args.tau {
        config.neuron.tau = tau;
    }
    if let Some(tau_r) = args.tau_r {
        config.neuron.tau_r = tau_r;
    }
    if let Some(v_th) = args.v_th {
        config.neuron.v_th = v_th;
    }
    if let Some(u_th) = args.u_th {
        config.neuron.u_th = u_th;
    }
    config.validate()?;
    Ok(config)
}

fn emit<R: Report>(report: &R, args: &CommonArgs) -> Result<()> {
    let text = render(report, args.format.into())?;
    write_out(&text, args.out.as_deref())
}

fn cmd_verify(args: &CommonArgs) -> Result<ExitCode> {
    let config = load_config(args)?;
    let mut opts = VerifyOptions {
        seed: config.seed,
        ..VerifyOptions::default()
    };
    if let Some(lengths) = &args.length {
        opts.oracle_lengths = lengths.clone();
    }
    let report = run_verify(&opts)?;
    for suite in &report.suites {
        let status = if suite.passed { "PASS" } else { "FAIL" };
        eprintln!("{status} {} ({} cases)", suite.name, suite.cases);
        for failure in &suite.failures {
            eprintln!(
                "  case {} (seed {}): {} [params {}, first mismatch {:?}]",
                failure.case, failure.seed, failure.detail, failure.params, failure.first_mismatch
            );
        }
    }
    emit(&report, args)?;
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_bench(args: &CommonArgs) -> Result<ExitCode> {
    let config = load_config(args)?;
    let opts = BenchOptions {
        seed: config.seed,
        lengths: config.bench.lengths.clone(),
        channels: config.bench.channels,
        iters: config.bench.iters,
        mode: config.bench.fire_mode.to_mode(config.seed),
        repeats: config.bench.repeats,
        warmup: config.bench.warmup,
        neuron: config.neuron.to_params()?,
    };
    let report = run_bench(&opts)?;
    for row in &report.rows {
        eprintln!(
            "L={}: serial {:.3} ms, parallel {:.3} ms, speedup {:.2}x",
            row.length,
            row.serial_seconds * 1e3,
            row.pmbc_seconds * 1e3,
            row.speedup
        );
    }
    emit(&report, args)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_converge(args: &CommonArgs) -> Result<ExitCode> {
    let config = load_config(args)?;
    let opts = ConvergeOptions {
        seed: config.seed,
        length: config.bench.lengths[0],
        channels: config.bench.channels,
        max_budget: config.bench.iters,
        mode: config.bench.fire_mode.to_mode(config.seed),
        neuron: config.neuron.to_params()?,
    };
    let report = run_converge(&opts)?;
    emit(&report, args)?;
    Ok(ExitCode::SUCCESS)
}

fn demo_options(
    config: &HarnessConfig,
    args: &CommonArgs,
    export_bounds: bool,
) -> Result<DemoOptions> {
    // For the stack commands, --length selects the sequence length.
    let length = match &args.length {
        Some(lengths) => lengths[0],
        None => config.ssm.length,
    };
    Ok(DemoOptions {
        seed: config.seed,
        layers: config.ssm.layers,
        channels: config.ssm.channels,
        state_size: config.ssm.state_size,
        delta: config.ssm.delta,
        length,
        iters: config.bench.iters,
        mode: config.bench.fire_mode.to_mode(config.seed),
        neuron: config.neuron.to_params()?,
        export_bounds,
    })
}

fn cmd_demo(args: &DemoArgs) -> Result<ExitCode> {
    let config = load_config(&args.common)?;
    let opts = demo_options(&config, &args.common, args.trace_out.is_some())?;
    let (report, bounds) = run_demo(&opts)?;
    for row in &report.rows {
        if row.residual_dropped {
            eprintln!(
                "warning: layer {} dropped its input residual (width changed)",
                row.layer
            );
        }
    }
    if let (Some(path), Some(table)) = (&args.trace_out, bounds) {
        std::fs::write(path, table.to_csv())?;
        eprintln!("bound traces written to {}", path.display());
    }
    emit(&report, &args.common)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_energy(args: &EnergyArgs) -> Result<ExitCode> {
    let config = load_config(&args.common)?;
    let model = EnergyModel::new(config.energy.e_mac, config.energy.e_ac)?;

    let layers: Vec<LayerOps> = if args.from_demo {
        let opts = demo_options(&config, &args.common, false)?;
        let (report, _) = run_demo(&opts)?;
        // The feature mix of each layer does 2*D*D dense ops per position.
        let dense = (2 * opts.channels * opts.channels * opts.length) as f64;
        report
            .rows
            .iter()
            .map(|row| LayerOps {
                dense_ops: dense,
                spiking_rate: row.spiking_rate_mean,
            })
            .collect()
    } else {
        let dense = args.dense_ops.clone().ok_or_else(|| {
            Error::Config("energy needs --dense-ops <list> or --from-demo".into())
        })?;
        let rates = match &args.rates {
            Some(rates) if rates.len() == dense.len() => rates.clone(),
            Some(rates) => {
                return Err(Error::Config(format!(
                    "--rates has {} entries but --dense-ops has {}",
                    rates.len(),
                    dense.len()
                )))
            }
            None => vec![1.0; dense.len()],
        };
        dense
            .into_iter()
            .zip(rates)
            .map(|(dense_ops, spiking_rate)| LayerOps {
                dense_ops,
                spiking_rate,
            })
            .collect()
    };

    let report = estimate_energy(&layers, &model)?;
    eprintln!(
        "dense: {:.4} G ops -> {:.4} mJ; spiking: {:.4} G ops -> {:.4} mJ",
        report.mac_ops / 1e9,
        report.mac_energy_j * 1e3,
        report.ac_ops / 1e9,
        report.ac_energy_j * 1e3
    );
    emit(&report, &args.common)?;
    Ok(ExitCode::SUCCESS)
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Verify(args) => cmd_verify(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::Converge(args) => cmd_converge(&args),
        Command::Energy(args) => cmd_energy(&args),
        Command::Demo(args) => cmd_demo(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
