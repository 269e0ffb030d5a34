//! Gradient descent with periodic uniform perturbation batches, plus the
//! baselines it is usually compared against (plain GD, stagnation-kicked GD,
//! simulated annealing), a suite of classic non-convex benchmark functions,
//! a multi-start robustness harness, and a 3D rigid-component packing solver
//! built on sphere decompositions.
//!
//! The library is organized so every stochastic run is reproducible: all
//! randomness flows through [`rng::RngStream`] (a pinned generator), every
//! solver records a [`trace::TraceStep`] history, and run artifacts
//! round-trip through documented CSV/JSON formats.
//!
//! Entry points:
//! - [`bench::fixture`] — named benchmark objectives with reference starts.
//! - [`optim`] — `run_gd`, `run_spgd`, `run_pgd`, `run_sa`.
//! - [`harness::run_experiment`] — the 30-random-start comparison protocol.
//! - [`packing`] — the bounding-volume/clearance packing problem and its
//!   schedule-driven solver.

pub mod bench;
pub mod error;
pub mod harness;
pub mod objective;
pub mod optim;
pub mod packing;
pub mod presets;
pub mod rng;
pub mod trace;
pub mod vector;

pub use error::{Error, Result};
