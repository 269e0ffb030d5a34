//! Simulated annealing with a geometric cooling schedule. Gradient-free:
//! every trace row reports `grad_norm = 0` and `grad_evals` stays zero.
//!
//! Proposals are uniform box moves x + U[−step_scale, step_scale) per
//! coordinate. Metropolis acceptance: Δ ≤ 0 always accepts; otherwise one
//! extra uniform draw u decides (accept iff u < exp(−Δ/T)), so the draw is
//! consumed only for uphill proposals. The trace records accepted states
//! only (as `perturb` events), which keeps `best_f == min(trace f)`: the
//! reported best is the best *visited* state, not the best rejected
//! proposal — a rejected downhill proposal cannot exist (Δ ≤ 0 always
//! accepts).

use std::time::Instant;

use crate::error::{Error, Result};
use crate::objective::{EvalContext, Objective};
use crate::rng::RngStream;
use crate::trace::{Event, RunResult, Termination};
use crate::vector::Vector;

use super::engine::Recorder;
use super::SaConfig;

/// Metropolis random search with temperature ladder t_init · cooling^k,
/// stopping once the temperature falls below `t_min`.
pub fn run_sa(obj: &dyn Objective, x0: &Vector, cfg: &SaConfig) -> Result<RunResult> {
    run_sa_opts(obj, x0, cfg, true)
}

pub(crate) fn run_sa_opts(
    obj: &dyn Objective,
    x0: &Vector,
    cfg: &SaConfig,
    record_trace: bool,
) -> Result<RunResult> {
    cfg.validate()?;
    if x0.dim() != obj.dimension() {
        return Err(Error::DimensionMismatch {
            expected: obj.dimension(),
            got: x0.dim(),
        });
    }
    let t0 = Instant::now();
    let mut ctx = EvalContext::new();
    let mut rec = Recorder::new(record_trace);
    let mut rng = RngStream::new(cfg.seed);

    let mut x = x0.to_vec();
    let mut f_cur = ctx.evaluate(obj, &x)?;
    rec.push(Event::Init, &x, f_cur, 0.0);

    let mut y = vec![0.0; x.len()];
    let mut termination = Termination::Cooled;
    let mut aborted = false;

    let mut t = cfg.t_init;
    'run: while t >= cfg.t_min {
        for _ in 0..cfg.steps_per_temp {
            for (yi, &xi) in y.iter_mut().zip(&x) {
                *yi = xi + rng.symmetric(cfg.step_scale);
            }
            if y.iter().any(|c| !c.is_finite()) {
                termination = Termination::NonFinite;
                aborted = true;
                break 'run;
            }
            let f_y = match ctx.evaluate(obj, &y) {
                Ok(f) => f,
                Err(_) => {
                    termination = Termination::NonFinite;
                    aborted = true;
                    break 'run;
                }
            };
            let delta = f_y - f_cur;
            let accept = delta <= 0.0 || rng.uniform() < (-delta / t).exp();
            if accept {
                x.clone_from(&y);
                f_cur = f_y;
                rec.push(Event::Perturb, &x, f_cur, 0.0);
            }
        }
        t *= cfg.cooling;
    }

    if !aborted {
        match ctx.evaluate(obj, &x) {
            Ok(f_fin) => {
                debug_assert_eq!(f_fin.to_bits(), f_cur.to_bits(), "objective must be pure");
                rec.push(Event::Terminated, &x, f_fin, 0.0);
            }
            Err(_) => termination = Termination::NonFinite,
        }
    }

    Ok(rec.finish(&ctx, termination, cfg.seed, t0))
}
