//! The four iterative solvers.
//!
//! GD and the perturbed variant share one engine (`engine.rs`): running the
//! perturbed solver with candidates disabled *is* the GD code path, which
//! keeps their traces identical by construction rather than by testing luck.

mod engine;
mod pgd;
mod sa;

pub use engine::{gd_step, run_gd, run_spgd, sample_perturbations, spgd_select};
pub use pgd::run_pgd;
pub use sa::run_sa;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::trace::RunResult;
use crate::vector::Vector;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GdConfig {
    /// Step size α in x ← x − α∇f(x).
    pub alpha: f64,
    /// Hard cap on descent iterations.
    pub max_iter: u64,
    /// Terminate when ‖∇f‖ falls below this.
    pub grad_tol: f64,
}

impl GdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        if !(self.grad_tol >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "grad_tol must be non-negative, got {}",
                self.grad_tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpgdConfig {
    pub gd: GdConfig,
    /// Candidates per perturbation batch. 0 is the documented off switch:
    /// the run degenerates to plain GD with an identical trace.
    pub n_p: u64,
    /// Descent iterations between perturbation batches.
    pub iter_p: u64,
    /// Half-width of the per-coordinate uniform candidate box.
    pub amp: f64,
    pub seed: u64,
    /// Clamp candidates to the objective's bounds. Off by default; needed on
    /// bounded plateaus (a tie-accepting walk on a dead-flat region would
    /// otherwise drift out of the domain and never find the basin).
    #[serde(default)]
    pub clamp: bool,
}

impl SpgdConfig {
    pub fn validate(&self) -> Result<()> {
        self.gd.validate()?;
        if self.iter_p == 0 {
            return Err(Error::InvalidConfig("iter_p must be at least 1".into()));
        }
        if !(self.amp > 0.0 && self.amp.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "amp must be positive, got {}",
                self.amp
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PgdConfig {
    pub gd: GdConfig,
    /// Gradient norm below which the solver counts a stagnation event and
    /// applies one unconditional kick. 0 disables kicks entirely, reducing
    /// the run to plain GD.
    pub stagnation_tol: f64,
    /// Half-width of the uniform kick.
    pub amp: f64,
    /// Kicks available before a further stagnation terminates the run.
    pub max_perturbations: u64,
    pub seed: u64,
}

impl PgdConfig {
    pub fn validate(&self) -> Result<()> {
        self.gd.validate()?;
        if !(self.stagnation_tol >= 0.0) {
            return Err(Error::InvalidConfig(
                "stagnation_tol must be non-negative".into(),
            ));
        }
        if !(self.amp > 0.0 && self.amp.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "amp must be positive, got {}",
                self.amp
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaConfig {
    pub t_init: f64,
    /// Geometric cooling ratio in (0, 1): T ← cooling·T per level.
    pub cooling: f64,
    pub steps_per_temp: u64,
    /// Half-width of the uniform proposal box.
    pub step_scale: f64,
    /// Final temperature; the run stops once T drops below it.
    pub t_min: f64,
    pub seed: u64,
}

impl SaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_init > 0.0 && self.t_init.is_finite()) {
            return Err(Error::InvalidConfig("t_init must be positive".into()));
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "cooling must be in (0,1), got {}",
                self.cooling
            )));
        }
        if self.steps_per_temp == 0 {
            return Err(Error::InvalidConfig(
                "steps_per_temp must be at least 1".into(),
            ));
        }
        if !(self.step_scale > 0.0 && self.step_scale.is_finite()) {
            return Err(Error::InvalidConfig("step_scale must be positive".into()));
        }
        if !(self.t_min > 0.0 && self.t_min < self.t_init) {
            return Err(Error::InvalidConfig(
                "t_min must satisfy 0 < t_min < t_init".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Gd,
    Pgd,
    Spgd,
    Sa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Gd,
        Algorithm::Pgd,
        Algorithm::Spgd,
        Algorithm::Sa,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Gd => "gd",
            Algorithm::Pgd => "pgd",
            Algorithm::Spgd => "spgd",
            Algorithm::Sa => "sa",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gd" => Algorithm::Gd,
            "pgd" => Algorithm::Pgd,
            "spgd" => Algorithm::Spgd,
            "sa" => Algorithm::Sa,
            other => return Err(Error::UnknownName(other.to_string())),
        })
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A solver plus its parameters, ready to run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgoConfig {
    Gd(GdConfig),
    Pgd(PgdConfig),
    Spgd(SpgdConfig),
    Sa(SaConfig),
}

impl AlgoConfig {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            AlgoConfig::Gd(_) => Algorithm::Gd,
            AlgoConfig::Pgd(_) => Algorithm::Pgd,
            AlgoConfig::Spgd(_) => Algorithm::Spgd,
            AlgoConfig::Sa(_) => Algorithm::Sa,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AlgoConfig::Gd(c) => c.validate(),
            AlgoConfig::Pgd(c) => c.validate(),
            AlgoConfig::Spgd(c) => c.validate(),
            AlgoConfig::Sa(c) => c.validate(),
        }
    }
}

/// Dispatch a configured solver. `seed` overrides the config's seed when
/// given (the harness derives one per trial); `record_trace` turns the
/// per-event history off for bulk sweeps.
pub fn run(
    cfg: &AlgoConfig,
    obj: &dyn Objective,
    x0: &Vector,
    seed: Option<u64>,
    record_trace: bool,
) -> Result<RunResult> {
    match cfg {
        AlgoConfig::Gd(c) => engine::run_gd_opts(obj, x0, c, record_trace),
        AlgoConfig::Spgd(c) => {
            let mut c = c.clone();
            if let Some(s) = seed {
                c.seed = s;
            }
            engine::run_spgd_opts(obj, x0, &c, record_trace)
        }
        AlgoConfig::Pgd(c) => {
            let mut c = c.clone();
            if let Some(s) = seed {
                c.seed = s;
            }
            pgd::run_pgd_opts(obj, x0, &c, record_trace)
        }
        AlgoConfig::Sa(c) => {
            let mut c = c.clone();
            if let Some(s) = seed {
                c.seed = s;
            }
            sa::run_sa_opts(obj, x0, &c, record_trace)
        }
    }
}
