//! The objective-function contract and the evaluation context that performs
//! dimension/finiteness checking and evaluation accounting.

use crate::error::{Error, Result};

/// A minimization target. Implementations must be pure: same input, same
/// output, no interior mutability — that is what makes runs replayable and
/// candidate evaluations safe to reorder or parallelize.
pub trait Objective: Send + Sync {
    fn name(&self) -> &str;

    fn dimension(&self) -> usize;

    /// Raw objective value. No checks, no counting — call through
    /// [`EvalContext::evaluate`] inside solvers.
    fn value(&self, x: &[f64]) -> f64;

    /// Analytic gradient written into `out` (`out.len() == dimension()`).
    fn gradient(&self, x: &[f64], out: &mut [f64]);

    /// Per-coordinate (lower, upper) bounds when the problem defines a
    /// search box (used by the multi-start protocol).
    fn bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        None
    }

    /// (x*, f*) when the global optimum is known.
    fn known_optimum(&self) -> Option<(Vec<f64>, f64)> {
        None
    }
}

/// Per-run evaluation accounting. Objectives stay pure; every counted
/// evaluation goes through these methods, which also enforce the dimension
/// and finiteness contracts.
#[derive(Debug, Default, Clone)]
pub struct EvalContext {
    pub fn_evals: u64,
    pub grad_evals: u64,
}

impl EvalContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn evaluate(&mut self, obj: &dyn Objective, x: &[f64]) -> Result<f64> {
        if x.len() != obj.dimension() {
            return Err(Error::DimensionMismatch {
                expected: obj.dimension(),
                got: x.len(),
            });
        }
        self.fn_evals += 1;
        let f = obj.value(x);
        if !f.is_finite() {
            return Err(Error::NonFinite {
                what: "objective value",
                x: x.to_vec(),
            });
        }
        Ok(f)
    }

    pub fn gradient(&mut self, obj: &dyn Objective, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != obj.dimension() {
            return Err(Error::DimensionMismatch {
                expected: obj.dimension(),
                got: x.len(),
            });
        }
        self.grad_evals += 1;
        let mut g = vec![0.0; x.len()];
        obj.gradient(x, &mut g);
        if g.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                what: "gradient component",
                x: x.to_vec(),
            });
        }
        Ok(g)
    }
}

/// Central-difference gradient, (f(x+h·e_k) − f(x−h·e_k)) / 2h per
/// coordinate. This is the oracle every analytic gradient in the crate is
/// verified against; evaluations are counted in `ctx`.
pub fn finite_difference_gradient(
    obj: &dyn Objective,
    x: &[f64],
    h: f64,
    ctx: &mut EvalContext,
) -> Result<Vec<f64>> {
    assert!(h > 0.0, "finite-difference step must be positive");
    let mut g = vec![0.0; x.len()];
    let mut probe = x.to_vec();
    for k in 0..x.len() {
        probe[k] = x[k] + h;
        let fp = ctx.evaluate(obj, &probe)?;
        probe[k] = x[k] - h;
        let fm = ctx.evaluate(obj, &probe)?;
        probe[k] = x[k];
        g[k] = (fp - fm) / (2.0 * h);
    }
    Ok(g)
}

/// Default central-difference step: balances truncation against rounding at
/// double precision for unit-scale problems.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Largest relative disagreement between two gradients, with an absolute
/// fallback near zero so stationary points do not divide by ~0.
pub fn max_rel_err(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(ai, bi)| (ai - bi).abs() / ai.abs().max(bi.abs()).max(1.0))
        .fold(0.0, f64::max)
}
