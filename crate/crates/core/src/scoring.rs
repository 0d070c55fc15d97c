//! Priority Score weighting and per-city ranking.
//!
//! Each of prevalence (P), untested share (U) and public-coverage share (H)
//! is min-max normalized within the city, then combined as
//! `alpha*P' + beta*U' + gamma*H'`. Beta and gamma come from the correlation
//! between coverage and prevalence (see [`WeightConfig::derive`]). Scores are
//! scaled so the top neighborhood reads 10.0.

use crate::error::{Error, Result};
use crate::model::{CityDataset, PriorityRanking, RankedEntry, WeightConfig, WeightVariant};
use crate::stats::{min_max_normalize, pearson};

pub const DEFAULT_ALPHA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreOptions {
    pub alpha: f64,
    pub variant: WeightVariant,
    /// Use this coverage/prevalence correlation instead of computing it.
    pub r_override: Option<f64>,
    /// Rescale (alpha, beta, gamma) to sum to one.
    pub normalize_weights: bool,
}

impl Default for ScoreOptions {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            variant: WeightVariant::Text,
            r_override: None,
            normalize_weights: false,
        }
    }
}

pub fn derive_weights(r: f64, alpha: f64, variant: WeightVariant) -> Result<WeightConfig> {
    WeightConfig::derive(r, alpha, variant)
}

/// Linear Priority Score on already-normalized metrics.
pub fn priority_score(coefficients: [f64; 3], normalized: [f64; 3]) -> f64 {
    coefficients[0] * normalized[0] + coefficients[1] * normalized[1] + coefficients[2] * normalized[2]
}

/// Ranks neighborhoods whose metrics are already on [0, 1].
///
/// Rows are `(canonical name, display name, [P', U', H'])`. The metric columns
/// of the returned entries hold the normalized values.
pub fn rank_normalized(
    city: &str,
    weights: WeightConfig,
    normalize_weights: bool,
    rows: impl IntoIterator<Item = (String, String, [f64; 3])>,
) -> Result<PriorityRanking> {
    let coefficients = weights.coefficients(normalize_weights);
    let entries = rows
        .into_iter()
        .map(|(name, display_name, metrics)| {
            if metrics.iter().any(|m| !(0.0..=1.0).contains(m)) {
                return Err(Error::Invariant(format!("{name}: normalized metrics must lie in [0, 1]")));
            }
            Ok(RankedEntry {
                raw_score: priority_score(coefficients, metrics),
                scaled_score: 0.0,
                prevalence: metrics[0],
                untested_pct: metrics[1],
                public_coverage_pct: metrics[2],
                name,
                display_name,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PriorityRanking::from_raw_scores(city.to_string(), weights, normalize_weights, entries, Vec::new())
}

/// Scores and ranks every neighborhood of a city.
pub fn score_city(dataset: &CityDataset, options: &ScoreOptions) -> Result<PriorityRanking> {
    let records = dataset.records();
    if records.len() < 2 {
        return Err(Error::TooFewValues { needed: 2, got: records.len() });
    }
    let p: Vec<f64> = records.iter().map(|r| r.prevalence()).collect();
    let u: Vec<f64> = records.iter().map(|r| r.untested_pct()).collect();
    let h: Vec<f64> = records.iter().map(|r| r.public_coverage_pct()).collect();

    let r = match options.r_override {
        Some(r) => r,
        None => pearson(&h, &p).map_err(|_| {
            Error::UndefinedCorrelation("coverage/prevalence correlation (supply an override)")
        })?,
    };
    let weights = WeightConfig::derive(r, options.alpha, options.variant)?;
    let coefficients = weights.coefficients(options.normalize_weights);

    let mut warnings = Vec::new();
    if weights.clamped() {
        warnings.push(format!("negative coverage correlation {r:.4} clamped to 0"));
    }
    let mut columns = Vec::with_capacity(3);
    for (label, values) in [("prevalence", &p), ("untested", &u), ("public coverage", &h)] {
        let normalized = min_max_normalize(values)?;
        if normalized.degenerate {
            warnings.push(format!("{label} column is constant; it contributes nothing to the score"));
        }
        columns.push(normalized.values);
    }

    let entries = records
        .iter()
        .enumerate()
        .map(|(i, rec)| RankedEntry {
            name: rec.name().to_string(),
            display_name: rec.display_name().to_string(),
            raw_score: priority_score(coefficients, [columns[0][i], columns[1][i], columns[2][i]]),
            scaled_score: 0.0,
            prevalence: rec.prevalence(),
            untested_pct: rec.untested_pct(),
            public_coverage_pct: rec.public_coverage_pct(),
        })
        .collect();
    PriorityRanking::from_raw_scores(
        dataset.city().id.clone(),
        weights,
        options.normalize_weights,
        entries,
        warnings,
    )
}

/// The first `k` names of a ranking (fewer if the ranking is shorter).
pub fn top_k(ranking: &PriorityRanking, k: usize) -> Vec<&str> {
    ranking.entries().iter().take(k).map(|e| e.name.as_str()).collect()
}
