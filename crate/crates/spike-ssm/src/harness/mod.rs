//! Measurement and verification harness behind the `spike-ssm` binary:
//! randomized equivalence suites, the serial-vs-parallel speed benchmark,
//! convergence curves, block demos, and MAC/AC energy accounting.

pub mod bench;
pub mod config;
pub mod converge;
pub mod demo;
pub mod energy;
pub mod report;
pub mod sampling;
pub mod verify;

pub use bench::{run_bench, BenchOptions, BenchReport, BenchRow};
pub use config::{HarnessConfig, OutputFormat};
pub use converge::{run_converge, ConvergeOptions, ConvergeReport, ConvergeRow};
pub use demo::{run_demo, DemoOptions, DemoReport};
pub use energy::{estimate_energy, EnergyModel, EnergyReport, LayerOps};
pub use report::{Report, Table};
pub use verify::{run_verify, VerifyOptions, VerifyReport};
