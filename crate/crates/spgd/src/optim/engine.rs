//! Shared descent engine: plain GD is the perturbed run with candidates
//! disabled, so both solvers execute the same code path and produce
//! structurally identical traces.
//!
//! Loop shape, per iteration i = 1..=max_iter:
//! 1. If a perturbation batch is due (every `iter_p` iterations), draw `n_p`
//!    candidates around the current point, evaluate them, and adopt the best
//!    one when its value does not exceed the current value (ties between
//!    candidates go to the lowest index). Adoption refreshes the gradient at
//!    the new point.
//! 2. Check termination: plain GD stops when ‖∇f‖ < grad_tol; the perturbed
//!    solver stops only after the gradient has stayed below tolerance for
//!    more than one full perturbation window with no candidate accepted
//!    (otherwise a quiet plateau would end the run before a batch could
//!    rescue it).
//! 3. Take the descent step x ← x − α∇f(x), evaluate, record, and refresh
//!    the gradient.
//!
//! Evaluation accounting is exact: 1 initial evaluation + 1 per step + n_p
//! per batch + 1 for the terminal re-evaluation (see `trace`), and the
//! candidate draws consume exactly n_p·d uniforms per batch in
//! candidate-major, coordinate-minor order.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::objective::{norm, EvalContext, Objective};
use crate::rng::RngStream;
use crate::trace::{Event, RunResult, Termination, TraceStep};
use crate::vector::Vector;

use super::{GdConfig, SpgdConfig};

/// One descent update, x − α·grad elementwise.
pub fn gd_step(x: &[f64], grad: &[f64], alpha: f64) -> Vec<f64> {
    debug_assert_eq!(x.len(), grad.len());
    x.iter().zip(grad).map(|(xi, gi)| xi - alpha * gi).collect()
}

/// Draw `n_p` candidates x + δ with each δ coordinate uniform on
/// [−amp, +amp). Draw order is candidate-major, coordinate-minor; exactly
/// n_p·dim uniforms are consumed.
pub fn sample_perturbations(x: &[f64], amp: f64, n_p: u64, rng: &mut RngStream) -> Vec<Vec<f64>> {
    (0..n_p)
        .map(|_| x.iter().map(|&xi| xi + rng.symmetric(amp)).collect())
        .collect()
}

/// Index of the smallest candidate value if it does not exceed the current
/// value (equality accepted); ties between candidates go to the lowest
/// index. `None` when every candidate is worse or the slice is empty.
pub fn spgd_select(candidate_fs: &[f64], f_current: f64) -> Option<usize> {
    let mut best = 0usize;
    for (i, &f) in candidate_fs.iter().enumerate().skip(1) {
        if f < candidate_fs[best] {
            best = i;
        }
    }
    (*candidate_fs.get(best)? <= f_current).then_some(best)
}

/// Trace rows plus best-state tracking. Best is the minimum over every
/// recorded state (including the start), so `best_f == min(trace f)` holds
/// whenever the trace is kept.
pub(crate) struct Recorder {
    rows: Option<Vec<TraceStep>>,
    next_iter: u64,
    best_f: f64,
    best_x: Vec<f64>,
}

impl Recorder {
    pub fn new(record_trace: bool) -> Self {
        Recorder {
            rows: record_trace.then(Vec::new),
            next_iter: 0,
            best_f: f64::INFINITY,
            best_x: Vec::new(),
        }
    }

    pub fn push(&mut self, event: Event, x: &[f64], f: f64, grad_norm: f64) {
        if f < self.best_f {
            self.best_f = f;
            self.best_x.clear();
            self.best_x.extend_from_slice(x);
        }
        if let Some(rows) = &mut self.rows {
            rows.push(TraceStep {
                iter: self.next_iter,
                event,
                x: Vector::new(x.to_vec()).expect("recorded states are finite"),
                f,
                grad_norm,
            });
        }
        self.next_iter += 1;
    }

    pub fn finish(
        self,
        ctx: &EvalContext,
        termination: Termination,
        seed: u64,
        t0: Instant,
    ) -> RunResult {
        RunResult {
            best_x: Vector::new(self.best_x).expect("best state is finite"),
            best_f: self.best_f,
            fn_evals: ctx.fn_evals,
            grad_evals: ctx.grad_evals,
            wall_time_ms: t0.elapsed().as_secs_f64() * 1e3,
            termination,
            seed,
            trace: self.rows,
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_engine(
    obj: &dyn Objective,
    x0: &Vector,
    gd: &GdConfig,
    n_p: u64,
    iter_p: u64,
    amp: f64,
    clamp_bounds: Option<(Vec<f64>, Vec<f64>)>,
    mut rng: Option<&mut RngStream>,
    record_trace: bool,
    seed: u64,
) -> Result<RunResult> {
    gd.validate()?;
    if x0.dim() != obj.dimension() {
        return Err(Error::DimensionMismatch {
            expected: obj.dimension(),
            got: x0.dim(),
        });
    }
    let t0 = Instant::now();
    let mut ctx = EvalContext::new();
    let mut rec = Recorder::new(record_trace);

    let mut x = x0.to_vec();
    let mut f_cur = ctx.evaluate(obj, &x)?;
    let mut g = ctx.gradient(obj, &x)?;
    let mut gn = norm(&g);
    rec.push(Event::Init, &x, f_cur, gn);

    let perturbing = n_p > 0;
    let mut quiet = 0u64; // small-gradient iterations since the last acceptance
    let mut since_phase = 0u64;
    let mut termination = Termination::MaxIter;
    let mut aborted = false;

    'run: for _ in 1..=gd.max_iter {
        if perturbing {
            since_phase += 1;
            if since_phase == iter_p {
                since_phase = 0;
                let rng = rng
                    .as_mut()
                    .expect("perturbed run requires a random stream");
                let mut cands = sample_perturbations(&x, amp, n_p, rng);
                if let Some((lo, hi)) = &clamp_bounds {
                    for c in &mut cands {
                        for ((ci, &l), &h) in c.iter_mut().zip(lo).zip(hi) {
                            *ci = ci.clamp(l, h);
                        }
                    }
                }
                let mut fs = Vec::with_capacity(cands.len());
                for c in &cands {
                    match ctx.evaluate(obj, c) {
                        Ok(f) => fs.push(f),
                        Err(_) => {
                            termination = Termination::NonFinite;
                            aborted = true;
                            break 'run;
                        }
                    }
                }
                match spgd_select(&fs, f_cur) {
                    Some(j) => {
                        x.clone_from(&cands[j]);
                        f_cur = fs[j];
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
                        rec.push(Event::PerturbAccepted, &x, f_cur, gn);
                        quiet = 0;
                    }
                    None => rec.push(Event::PerturbRejected, &x, f_cur, gn),
                }
            }
        }

        if gn < gd.grad_tol {
            if perturbing {
                quiet += 1;
                if quiet > iter_p {
                    termination = Termination::QuietWindow;
                    break 'run;
                }
            } else {
                termination = Termination::GradTol;
                break 'run;
            }
        } else {
            quiet = 0;
        }

        x = gd_step(&x, &g, gd.alpha);
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
        // Terminal re-evaluation: counted, and doubles as a purity check.
        match ctx.evaluate(obj, &x) {
            Ok(f_fin) => {
                debug_assert_eq!(f_fin.to_bits(), f_cur.to_bits(), "objective must be pure");
                rec.push(Event::Terminated, &x, f_fin, gn);
            }
            Err(_) => termination = Termination::NonFinite,
        }
    }

    Ok(rec.finish(&ctx, termination, seed, t0))
}

/// Plain gradient descent: x ← x − α∇f(x) until ‖∇f‖ < grad_tol or
/// max_iter.
pub fn run_gd(obj: &dyn Objective, x0: &Vector, cfg: &GdConfig) -> Result<RunResult> {
    run_gd_opts(obj, x0, cfg, true)
}

pub(crate) fn run_gd_opts(
    obj: &dyn Objective,
    x0: &Vector,
    cfg: &GdConfig,
    record_trace: bool,
) -> Result<RunResult> {
    run_engine(obj, x0, cfg, 0, 1, 0.0, None, None, record_trace, 0)
}

/// Gradient descent interleaved with periodic uniform candidate batches:
/// every `iter_p` iterations, the best of `n_p` uniform perturbations
/// replaces the iterate when it is at least as good.
pub fn run_spgd(obj: &dyn Objective, x0: &Vector, cfg: &SpgdConfig) -> Result<RunResult> {
    run_spgd_opts(obj, x0, cfg, true)
}

pub(crate) fn run_spgd_opts(
    obj: &dyn Objective,
    x0: &Vector,
    cfg: &SpgdConfig,
    record_trace: bool,
) -> Result<RunResult> {
    cfg.validate()?;
    let mut rng = RngStream::new(cfg.seed);
    let clamp_bounds = if cfg.clamp { obj.bounds() } else { None };
    run_engine(
        obj,
        x0,
        &cfg.gd,
        cfg.n_p,
        cfg.iter_p,
        cfg.amp,
        clamp_bounds,
        Some(&mut rng),
        record_trace,
        cfg.seed,
    )
}
