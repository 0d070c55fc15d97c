//! Data files bundled with the crate.
//!
//! `model_runs.json` records the five published model recommendations
//! (top three per city), `targets.json` the nine empirical high-risk
//! neighborhoods, and `aliases.json` the default alias table. The demo city
//! CSV is synthetic and exists only to exercise the pipeline.

use std::path::PathBuf;

use crate::error::Result;
use crate::model::{CityDataset, CityRegistry, ModelRun, TargetSet};
use crate::names::AliasTable;
use crate::ingest::{self, IngestOptions};

pub const MODEL_RUNS_JSON: &str = include_str!("../data/model_runs.json");
pub const TARGETS_JSON: &str = include_str!("../data/targets.json");
pub const ALIASES_JSON: &str = include_str!("../data/aliases.json");
pub const DEMO_CHICAGO_CSV: &str = include_str!("../data/demo_chicago_synthetic.csv");

/// Directory holding the bundled files on disk.
pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn default_aliases() -> AliasTable {
    AliasTable::from_json_str(ALIASES_JSON).expect("bundled alias table is valid")
}

pub fn model_runs() -> Result<Vec<ModelRun>> {
    Ok(ingest::parse_model_runs_str(MODEL_RUNS_JSON, &default_aliases())?.value)
}

pub fn targets() -> Result<TargetSet> {
    Ok(ingest::parse_targets_str(TARGETS_JSON, &default_aliases())?.value)
}

pub fn demo_chicago() -> Result<CityDataset> {
    let city = CityRegistry::default().get("chicago")?.clone();
    let options = IngestOptions { strict: false, aliases: default_aliases() };
    Ok(ingest::parse_city_dataset_str(DEMO_CHICAGO_CSV, &city, &options)?.value)
}
