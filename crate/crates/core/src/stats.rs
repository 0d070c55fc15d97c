//! Correlation and normalization primitives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::COL_PREVALENCE;
use crate::model::CityDataset;

/// Correlation estimator used by [`correlate_factors`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    #[default]
    Pearson,
    /// Pearson on average ranks. Diagnostic only.
    Spearman,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub factor: String,
    pub r: f64,
    pub n: usize,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Pearson product-moment correlation, computed in two passes.
///
/// Fails if the lengths differ, fewer than two pairs are given, or either
/// input has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::TooFewValues { needed: 2, got: x.len() });
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::UndefinedCorrelation("first input"));
    }
    if syy == 0.0 {
        return Err(Error::UndefinedCorrelation("second input"));
    }
    let r = sxy / (sxx * syy).sqrt();
    Ok(r.clamp(-1.0, 1.0))
}

/// Average ranks (1-based), ties sharing the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Correlates each named column against prevalence over rows where both exist.
///
/// Column names are the CSV headers: `untested_pct`, `public_coverage_pct`,
/// `prevalence_per_1000`, or any extra factor column.
pub fn correlate_factors(dataset: &CityDataset, factors: &[&str], estimator: Estimator) -> Result<Vec<CorrelationResult>> {
    let known = dataset.factor_names();
    factors
        .iter()
        .map(|&factor| {
            let core = matches!(
                factor,
                crate::ingest::COL_PREVALENCE | crate::ingest::COL_UNTESTED | crate::ingest::COL_PUBLIC_COVERAGE
            );
            if !core && !known.contains(factor) {
                return Err(Error::UnknownFactor(factor.to_string()));
            }
            let (xs, ys): (Vec<f64>, Vec<f64>) = dataset
                .records()
                .iter()
                .filter_map(|rec| Some((rec.factor(factor)?, rec.factor(COL_PREVALENCE)?)))
                .unzip();
            if xs.len() < 2 {
                return Err(Error::InsufficientOverlap { factor: factor.to_string(), rows: xs.len() });
            }
            let r = match estimator {
                Estimator::Pearson => pearson(&xs, &ys),
                Estimator::Spearman => spearman(&xs, &ys),
            }
            .map_err(|e| match e {
                Error::UndefinedCorrelation(_) => Error::UndefinedCorrelation(if factor == COL_PREVALENCE {
                    "prevalence"
                } else {
                    "factor column or prevalence"
                }),
                other => other,
            })?;
            Ok(CorrelationResult { factor: factor.to_string(), r, n: xs.len() })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub values: Vec<f64>,
    /// All inputs were equal; every output is 0.
    pub degenerate: bool,
}

/// Min-max scales values onto [0, 1].
pub fn min_max_normalize(values: &[f64]) -> Result<Normalized> {
    if values.is_empty() {
        return Err(Error::TooFewValues { needed: 1, got: 0 });
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let span = hi - lo;
    if span == 0.0 {
        return Ok(Normalized { values: vec![0.0; values.len()], degenerate: true });
    }
    let values = values
        .iter()
        .map(|&v| if v == hi { 1.0 } else { ((v - lo) / span).clamp(0.0, 1.0) })
        .collect();
    Ok(Normalized { values, degenerate: false })
}
