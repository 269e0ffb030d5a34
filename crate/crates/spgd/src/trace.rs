//! Run records: per-event trace rows, CSV import/export, and the run
//! summary that solvers return.
//!
//! Trace semantics shared by all solvers:
//! - Row 0 is always an `init` row recording the starting state.
//! - A `gd-step` row records the state *after* one descent update;
//!   `grad_norm` on that row is the norm of the gradient that produced the
//!   step (evaluated at the pre-step point).
//! - Perturbation-batch rows (`perturb-accepted` / `perturb-rejected`)
//!   record the conditional-move rule: accepted rows never increase `f`.
//! - A bare `perturb` row is an *unconditional* move (a stagnation kick or
//!   an annealing acceptance) and may increase `f`.
//! - The final `terminated` row re-evaluates the objective at the terminal
//!   point; the re-evaluation is counted, which keeps
//!   `fn_evals >= trace rows` an exact invariant, and doubles as a purity
//!   check on the objective. Runs aborted by a non-finite value carry no
//!   `terminated` row — the trace is the partial history.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Event {
    Init,
    GdStep,
    PerturbAccepted,
    PerturbRejected,
    Perturb,
    Terminated,
}

impl Event {
    pub fn as_str(self) -> &'static str {
        match self {
            Event::Init => "init",
            Event::GdStep => "gd-step",
            Event::PerturbAccepted => "perturb-accepted",
            Event::PerturbRejected => "perturb-rejected",
            Event::Perturb => "perturb",
            Event::Terminated => "terminated",
        }
    }

    pub fn parse(s: &str) -> Result<Event> {
        Ok(match s {
            "init" => Event::Init,
            "gd-step" => Event::GdStep,
            "perturb-accepted" => Event::PerturbAccepted,
            "perturb-rejected" => Event::PerturbRejected,
            "perturb" => Event::Perturb,
            "terminated" => Event::Terminated,
            other => return Err(Error::UnknownName(other.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    /// Monotone event counter (not the solver's loop index): a single loop
    /// iteration can emit several rows.
    pub iter: u64,
    pub event: Event,
    pub x: Vector,
    pub f: f64,
    /// Norm of the most recently evaluated gradient at the time the row was
    /// recorded; 0.0 for gradient-free solvers.
    pub grad_norm: f64,
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// Gradient norm fell below the configured tolerance.
    GradTol,
    /// Iteration cap reached.
    MaxIter,
    /// Gradient stayed below tolerance for a full perturbation window with
    /// no candidate accepted.
    QuietWindow,
    /// Stagnation detected with no perturbation budget left.
    StagnationBudget,
    /// Annealing temperature dropped below its floor.
    Cooled,
    /// A non-finite value aborted the run; the trace is partial.
    NonFinite,
    /// Packing only: penetration exceeded the barrier's working range.
    Collision,
    /// Packing only: no best-loss improvement within the patience window.
    Patience,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunResult {
    pub best_x: Vector,
    /// Minimum objective value over the starting point and every recorded
    /// state (equals the minimum `f` in the trace).
    pub best_f: f64,
    pub fn_evals: u64,
    pub grad_evals: u64,
    pub wall_time_ms: f64,
    pub termination: Termination,
    /// Seed consumed by the run's random stream; 0 for deterministic
    /// solvers that draw nothing.
    pub seed: u64,
    /// Full event history; `None` when recording was disabled (bulk sweeps).
    /// Excluded from the JSON summary — traces have their own CSV format.
    #[serde(skip)]
    pub trace: Option<Vec<TraceStep>>,
}

impl RunResult {
    pub fn trace_csv_string(&self) -> Option<String> {
        self.trace.as_ref().map(|t| {
            let mut buf = Vec::new();
            write_trace_csv(&mut buf, t).expect("write to Vec cannot fail");
            String::from_utf8(buf).expect("trace CSV is ASCII")
        })
    }
}

/// CSV layout: `iter,event,f,grad_norm,x0,...,x{d-1}`, reals with 17
/// significant digits so values round-trip bit-exactly.
pub fn write_trace_csv<W: Write>(w: &mut W, steps: &[TraceStep]) -> std::io::Result<()> {
    let dim = steps.first().map_or(0, |s| s.x.dim());
    write!(w, "iter,event,f,grad_norm")?;
    for k in 0..dim {
        write!(w, ",x{k}")?;
    }
    writeln!(w)?;
    for s in steps {
        write!(
            w,
            "{},{},{:.16e},{:.16e}",
            s.iter,
            s.event.as_str(),
            s.f,
            s.grad_norm
        )?;
        for c in s.x.iter() {
            write!(w, ",{c:.16e}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn read_trace_csv<R: BufRead>(r: R) -> Result<Vec<TraceStep>> {
    let mut steps = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::io(format!("trace line {}", lineno + 1), e))?;
        if lineno == 0 || line.is_empty() {
            continue;
        }
        let bad = || Error::InvalidConfig(format!("malformed trace row {}: {line:?}", lineno + 1));
        let mut fields = line.split(',');
        let iter = fields
            .next()
            .ok_or_else(bad)?
            .parse::<u64>()
            .map_err(|_| bad())?;
        let event = Event::parse(fields.next().ok_or_else(bad)?)?;
        let f = fields
            .next()
            .ok_or_else(bad)?
            .parse::<f64>()
            .map_err(|_| bad())?;
        let grad_norm = fields
            .next()
            .ok_or_else(bad)?
            .parse::<f64>()
            .map_err(|_| bad())?;
        let coords = fields
            .map(|c| c.parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<f64>>>()?;
        steps.push(TraceStep {
            iter,
            event,
            x: Vector::new(coords)?,
            f,
            grad_norm,
        });
    }
    Ok(steps)
}
