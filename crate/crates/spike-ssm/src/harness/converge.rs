//! Convergence of the explicit spiking state over iteration budgets.
//!
//! One batched solve at the largest budget yields the whole curve: bound
//! tightening is deterministic, so the bounds after j iterations of an
//! M-iteration run are exactly the bounds of a budget-j run. Budgets past
//! early convergence hold the final value.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harness::report::{fmt_f64, Report, Table};
use crate::harness::sampling::{gaussian_trace, rng_for};
use crate::neuron::NeuronParams;
use crate::pmbc::{pmbc_solve_batch, FireMode};
use crate::trace::Trace;

#[derive(Debug, Clone)]
pub struct ConvergeOptions {
    pub seed: u64,
    pub length: usize,
    pub channels: usize,
    pub max_budget: usize,
    pub mode: FireMode,
    pub neuron: NeuronParams,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergeRow {
    pub budget: usize,
    pub mean_explicit: f64,
    pub mean_fuzzy_rate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergeReport {
    pub seed: u64,
    pub length: usize,
    pub channels: usize,
    pub tau: f64,
    pub v_th: f64,
    pub u_th: f64,
    pub rows: Vec<ConvergeRow>,
}

impl Report for ConvergeReport {
    fn to_table(&self) -> Table {
        let mut table = Table::new(&["budget", "mean_explicit", "mean_fuzzy_rate"]);
        for row in &self.rows {
            table.push_row(vec![
                row.budget.to_string(),
                fmt_f64(row.mean_explicit),
                fmt_f64(row.mean_fuzzy_rate),
            ]);
        }
        table
    }
}

pub fn run_converge(opts: &ConvergeOptions) -> Result<ConvergeReport> {
    let inputs: Vec<Trace> = (0..opts.channels)
        .map(|ch| gaussian_trace(&mut rng_for(opts.seed, ch as u64), opts.length))
        .collect();
    let results = pmbc_solve_batch(&opts.neuron, &inputs, opts.max_budget, opts.mode)?;

    let mut rows = Vec::with_capacity(opts.max_budget);
    for budget in 1..=opts.max_budget {
        let mean_explicit = results
            .iter()
            .map(|r| {
                let history = &r.explicit_history;
                history[budget.min(history.len() - 1)]
            })
            .sum::<f64>()
            / results.len() as f64;
        rows.push(ConvergeRow {
            budget,
            mean_explicit,
            mean_fuzzy_rate: 1.0 - mean_explicit,
        });
    }
    Ok(ConvergeReport {
        seed: opts.seed,
        length: opts.length,
        channels: opts.channels,
        tau: opts.neuron.tau,
        v_th: opts.neuron.v_th,
        u_th: opts.neuron.u_th,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn options() -> ConvergeOptions {
        ConvergeOptions {
            seed: 21,
            length: 256,
            channels: 8,
            max_budget: 6,
            mode: FireMode::AllZero,
            neuron: NeuronParams::soft_reset(0.1, 1.0, 1.0).unwrap(),
        }
    }

    #[test]
    fn explicit_fraction_is_nondecreasing_in_budget() {
        let report = run_converge(&options()).unwrap();
        assert_eq!(report.rows.len(), 6);
        for pair in report.rows.windows(2) {
            assert!(pair[1].mean_explicit >= pair[0].mean_explicit - 1e-15);
        }
        for row in &report.rows {
            assert!((row.mean_explicit + row.mean_fuzzy_rate - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn full_budget_leaves_nothing_fuzzy() {
        let mut opts = options();
        opts.max_budget = opts.length;
        let report = run_converge(&opts).unwrap();
        let last = report.rows.last().unwrap();
        assert_eq!(last.mean_fuzzy_rate, 0.0);
        assert_eq!(last.mean_explicit, 1.0);
    }

    #[test]
    fn per_budget_rows_match_independent_solves() {
        let opts = options();
        let report = run_converge(&opts).unwrap();
        for budget in [1usize, 3, 6] {
            let inputs: Vec<Trace> = (0..opts.channels)
                .map(|ch| gaussian_trace(&mut rng_for(opts.seed, ch as u64), opts.length))
                .collect();
            let independent = pmbc_solve_batch(&opts.neuron, &inputs, budget, opts.mode).unwrap();
            let mean_fuzzy =
                independent.iter().map(|r| r.fuzzy_rate).sum::<f64>() / independent.len() as f64;
            let row = &report.rows[budget - 1];
            assert!(
                (row.mean_fuzzy_rate - mean_fuzzy).abs() < 1e-15,
                "budget {budget}: {} vs {mean_fuzzy}",
                row.mean_fuzzy_rate
            );
        }
    }
}
