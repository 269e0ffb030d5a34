//! Frozen per-function solver settings. The shipped collection is named
//! `reference`; values were fixed by a coarse grid search against each
//! function's reference targets (see `docs/presets.md`) and are embedded in
//! the binary so results cannot drift with the working directory.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::optim::{AlgoConfig, Algorithm, GdConfig, PgdConfig, SaConfig, SpgdConfig};

/// Name of the shipped preset collection.
pub const REFERENCE: &str = "reference";

/// The four solver configurations shipped for one benchmark function.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionPresets {
    pub gd: GdConfig,
    pub pgd: PgdConfig,
    pub spgd: SpgdConfig,
    pub sa: SaConfig,
}

impl FunctionPresets {
    /// The stored configuration for one algorithm.
    pub fn config(&self, algo: Algorithm) -> AlgoConfig {
        match algo {
            Algorithm::Gd => AlgoConfig::Gd(self.gd.clone()),
            Algorithm::Pgd => AlgoConfig::Pgd(self.pgd.clone()),
            Algorithm::Spgd => AlgoConfig::Spgd(self.spgd.clone()),
            Algorithm::Sa => AlgoConfig::Sa(self.sa.clone()),
        }
    }
}

static REFERENCE_JSON: &str = include_str!("presets/benchmarks.json");

fn table() -> &'static BTreeMap<String, FunctionPresets> {
    static TABLE: OnceLock<BTreeMap<String, FunctionPresets>> = OnceLock::new();
    TABLE.get_or_init(|| {
        serde_json::from_str(REFERENCE_JSON).expect("embedded preset table is valid")
    })
}

/// Presets for `function` from the named collection (only [`REFERENCE`]
/// ships).
pub fn lookup(collection: &str, function: &str) -> Result<FunctionPresets> {
    if collection != REFERENCE {
        return Err(Error::UnknownName(format!(
            "unknown preset collection `{collection}` (available: {REFERENCE})"
        )));
    }
    reference(function)
}

/// Presets for `function` from the shipped [`REFERENCE`] collection.
pub fn reference(function: &str) -> Result<FunctionPresets> {
    table().get(function).cloned().ok_or_else(|| {
        let known: Vec<&str> = table().keys().map(String::as_str).collect();
        Error::UnknownName(format!(
            "no presets for function `{function}` (available: {})",
            known.join(", ")
        ))
    })
}
