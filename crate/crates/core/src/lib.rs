//! Neighborhood lead-testing prioritization.
//!
//! The pipeline runs in four steps:
//!
//! 1. [`ingest`] loads a city's per-neighborhood prevalence, untested-children
//!    share and public-coverage share from CSV, canonicalizing names.
//! 2. [`stats`] correlates risk factors with prevalence; the coverage
//!    correlation sets the score weights.
//! 3. [`scoring`] normalizes the three metrics within the city, combines them
//!    into a Priority Score and ranks neighborhoods on a 0–10 scale.
//! 4. [`allocation`] turns a ranking into integer kit counts, and
//!    [`evaluation`] audits externally recorded recommendations against
//!    known high-risk neighborhoods with a top-k overlap accuracy.

pub mod allocation;
pub mod error;
pub mod evaluation;
pub mod fixtures;
pub mod ingest;
pub mod model;
pub mod names;
pub mod scoring;
pub mod stats;

pub use allocation::{allocate, largest_remainder, AllocationParams};
pub use error::{Error, Result};
pub use evaluation::{build_report, city_hits, run_accuracy};
pub use ingest::{IngestOptions, Parsed, ValidationReport};
pub use model::{
    AccuracyReport, Allocation, AllocationPlan, AllocationStrategy, CityDataset, CityProfile, CityRegistry,
    Fraction, ModelRun, NeighborhoodRecord, PriorityRanking, RankedEntry, Recommendation, RunAccuracy,
    TargetSet, UnitKind, WeightConfig, WeightVariant,
};
pub use names::{canonicalize_name, AliasTable};
pub use scoring::{derive_weights, score_city, top_k, ScoreOptions};
pub use stats::{correlate_factors, min_max_normalize, pearson, CorrelationResult, Estimator};
