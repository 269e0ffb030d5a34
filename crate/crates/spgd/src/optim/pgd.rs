//! Stagnation-triggered perturbed descent: plain GD until the gradient norm
//! drops below `stagnation_tol`, then one unconditional random kick of every
//! coordinate (recorded as a `perturb` event — it may raise the objective),
//! up to `max_perturbations` kicks in total. With `stagnation_tol = 0` the
//! kick machinery is disabled and the run is bitwise identical to plain GD
//! apart from the termination label.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::objective::{norm, EvalContext, Objective};
use crate::rng::RngStream;
use crate::trace::{Event, RunResult, Termination};
use crate::vector::Vector;

use super::engine::{gd_step, Recorder};
use super::PgdConfig;

/// Gradient descent with unconditional random kicks whenever progress
/// stalls (‖∇f‖ < stagnation_tol), bounded by a kick budget.
pub fn run_pgd(obj: &dyn Objective, x0: &Vector, cfg: &PgdConfig) -> Result<RunResult> {
    run_pgd_opts(obj, x0, cfg, true)
}

pub(crate) fn run_pgd_opts(
    obj: &dyn Objective,
    x0: &Vector,
    cfg: &PgdConfig,
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
    let mut g = ctx.gradient(obj, &x)?;
    let mut gn = norm(&g);
    rec.push(Event::Init, &x, f_cur, gn);

    let mut kicks = 0u64;
    let mut termination = Termination::MaxIter;
    let mut aborted = false;

    'run: for _ in 1..=cfg.gd.max_iter {
        if cfg.stagnation_tol > 0.0 && gn < cfg.stagnation_tol {
            if kicks == cfg.max_perturbations {
                termination = Termination::StagnationBudget;
                break 'run;
            }
            kicks += 1;
            for xi in &mut x {
                *xi += rng.symmetric(cfg.amp);
            }
            if x.iter().any(|c| !c.is_finite()) {
                termination = Termination::NonFinite;
                aborted = true;
                break 'run;
            }
            match ctx.evaluate(obj, &x) {
                Ok(f) => f_cur = f,
                Err(_) => {
                    termination = Termination::NonFinite;
                    aborted = true;
                    break 'run;
                }
            }
            match ctx.gradient(obj, &x) {
                Ok(v) => {
                    g = v;
                    gn = norm(&g);
                }
                Err(_) => {
                    termination = Termination::NonFinite;
                    aborted = true;
                    break 'run;
                }
            }
            rec.push(Event::Perturb, &x, f_cur, gn);
        } else if gn < cfg.gd.grad_tol {
            termination = Termination::GradTol;
            break 'run;
        }

        x = gd_step(&x, &g, cfg.gd.alpha);
        if x.iter().any(|c| !c.is_finite()) {
            termination = Termination::NonFinite;
            aborted = true;
            break 'run;
        }
        match ctx.evaluate(obj, &x) {
            Ok(f) => f_cur = f,
            Err(_) => {
                termination = Termination::NonFinite;
                aborted = true;
                break 'run;
            }
        }
        rec.push(Event::GdStep, &x, f_cur, gn);
        match ctx.gradient(obj, &x) {
            Ok(v) => {
                g = v;
                gn = norm(&g);
            }
            Err(_) => {
                termination = Termination::NonFinite;
                aborted = true;
                break 'run;
            }
        }
    }

    if !aborted {
        match ctx.evaluate(obj, &x) {
            Ok(f_fin) => {
                debug_assert_eq!(f_fin.to_bits(), f_cur.to_bits(), "objective must be pure");
                rec.push(Event::Terminated, &x, f_fin, gn);
            }
            Err(_) => termination = Termination::NonFinite,
        }
    }

    Ok(rec.finish(&ctx, termination, cfg.seed, t0))
}
