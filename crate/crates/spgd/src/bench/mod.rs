//! Named benchmark fixtures: each pairs an objective with the reference
//! start point and perturbation amplitude used throughout the examples,
//! presets, and acceptance tests.

mod functions;

pub use functions::{
    Ackley, Easom, Levy13, Peaks, Quartic1d, PEAKS_MIN_F, PEAKS_MIN_X, QUARTIC_BARRIER_X,
    QUARTIC_GLOBAL_MIN_F, QUARTIC_GLOBAL_MIN_X, QUARTIC_LOCAL_MIN_F, QUARTIC_LOCAL_MIN_X,
};

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::vector::Vector;

/// A benchmark objective plus the reference start and batch amplitude.
pub struct BenchmarkFixture {
    pub objective: Box<dyn Objective>,
    /// Reference start point for single-run comparisons.
    pub x0: Vector,
    /// Reference perturbation amplitude for the candidate batches.
    pub amp: f64,
}

/// Names accepted by [`fixture`], in display order.
pub const NAMES: [&str; 5] = ["peaks", "ackley", "easom", "levy13", "quartic1d"];

/// Look up a fixture by name (see [`NAMES`]).
pub fn fixture(name: &str) -> Result<BenchmarkFixture> {
    let (objective, x0, amp): (Box<dyn Objective>, Vec<f64>, f64) = match name {
        "peaks" => (Box::new(Peaks), vec![-2.81, -1.47], 2.5),
        "ackley" => (Box::new(Ackley), vec![-3.75, -1.96], 2.5),
        "easom" => (Box::new(Easom), vec![69.33, 12.23], 5.0),
        "levy13" => (Box::new(Levy13), vec![-3.75, -1.96], 2.5),
        "quartic1d" => (Box::new(Quartic1d), vec![0.5], 2.0),
        _ => {
            return Err(Error::UnknownName(format!(
                "unknown benchmark function `{name}`"
            )))
        }
    };
    Ok(BenchmarkFixture {
        objective,
        x0: Vector::new(x0)?,
        amp,
    })
}
