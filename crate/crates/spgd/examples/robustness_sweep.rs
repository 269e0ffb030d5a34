//! The 30-random-start robustness protocol on all four 2D benchmarks.
//!
//! Every solver runs from the same 30 uniformly sampled start points (one
//! shared sample per function, per-trial seeds derived from one master
//! seed), and each report row compares a solver against the perturbed
//! reference: how many of its runs converged to the global minimum within
//! tolerance, and how much further from the optimum it finished.
//!
//! Thread count comes from SPGD_THREADS (default: available parallelism);
//! the report values are identical at any thread count.
//!
//! Run with: `cargo run --release --example robustness_sweep`

use spgd::harness::{run_experiment, ExperimentConfig};
use spgd::optim::Algorithm;

fn main() -> spgd::Result<()> {
    for function in ["peaks", "ackley", "easom", "levy13"] {
        let cfg = ExperimentConfig {
            function: function.to_string(),
            algorithms: Algorithm::ALL.to_vec(),
            n_trials: 30,
            bounds: None, // each benchmark's standard search box
            configs: Default::default(),
            master_seed: 27,
            tol: 1e-3,
        };
        let report = run_experiment(&cfg, None)?;

        println!(
            "{function}: {} trials, tolerance {}",
            report.n_trials, report.tol
        );
        println!(
            "  {:<5} {:>10} {:>18} {:>12}",
            "algo", "converged", "f-gap vs spgd (%)", "closer (%)"
        );
        for row in &report.rows {
            let (fval, closer) = match (row.fval_improvement_pct, row.closer_pct) {
                (Some(f), Some(c)) => (format!("{f:.2}"), format!("{c:.1}")),
                _ => ("-".into(), "-".into()), // the reference row
            };
            println!(
                "  {:<5} {:>7}/30 {:>18} {:>12}",
                row.algorithm.as_str(),
                row.converged_runs,
                fval,
                closer
            );
        }
        println!();
    }
    Ok(())
}
