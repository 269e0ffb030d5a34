//! Head-to-head on the four 2D benchmarks: every solver starts from the
//! same reference point with its shipped parameters, and the table shows
//! who reaches the global minimum and at what evaluation cost.
//!
//! The pattern to look for: plain descent (gd) and its restarted variant
//! (pgd) stall in local basins or flat regions, simulated annealing (sa)
//! wanders, and the perturbed descent (spgd) lands the global minimum on
//! every function.
//!
//! Run with: `cargo run --release --example benchmark_showdown`

use spgd::bench::fixture;
use spgd::optim::{self, Algorithm};
use spgd::presets;

fn main() -> spgd::Result<()> {
    for function in ["peaks", "ackley", "easom", "levy13"] {
        let fx = fixture(function)?;
        let (x_star, f_star) = fx
            .objective
            .known_optimum()
            .expect("benchmark optima are known");
        println!(
            "{function}: global minimum f({}) = {f_star:.9}, start {:?}",
            x_star
                .iter()
                .map(|v| format!("{v:.4}"))
                .collect::<Vec<_>>()
                .join(", "),
            fx.x0.as_slice(),
        );

        let presets = presets::reference(function)?;
        println!(
            "  {:<5} {:>16} {:>12} {:>12}  {}",
            "algo", "best_f", "fn_evals", "grad_evals", "verdict"
        );
        for algo in Algorithm::ALL {
            let cfg = presets.config(algo);
            let result = optim::run(&cfg, fx.objective.as_ref(), &fx.x0, None, false)?;
            let verdict = if (result.best_f - f_star).abs() < 1e-3 {
                "global minimum"
            } else {
                "stuck elsewhere"
            };
            println!(
                "  {:<5} {:>16.9} {:>12} {:>12}  {verdict}",
                algo.as_str(),
                result.best_f,
                result.fn_evals,
                result.grad_evals
            );
        }
        println!();
    }
    Ok(())
}
