//! Top-k overlap accuracy of recorded model recommendations.
//!
//! A city scores one hit for every target neighborhood that appears anywhere
//! in the model's first `k` recommendations. Order inside the top `k` does not
//! matter. A run's accuracy is its total hits over the total number of targets
//! across all target cities, so a city the model skipped still counts in the
//! denominator.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::model::{AccuracyReport, Fraction, ModelRun, RunAccuracy, TargetSet};

pub const DEFAULT_K: usize = 3;
pub const DISPLAY_DECIMALS: u32 = 2;

/// Number of distinct targets among the first `k` recommendations.
pub fn city_hits<S: AsRef<str>>(recommended: &[S], targets: &BTreeSet<String>, k: usize) -> u64 {
    recommended
        .iter()
        .take(k)
        .map(AsRef::as_ref)
        .collect::<BTreeSet<&str>>()
        .into_iter()
        .filter(|name| targets.contains(*name))
        .count() as u64
}

pub fn run_accuracy(run: &ModelRun, targets: &TargetSet, k: usize) -> RunAccuracy {
    let mut hits_per_city = BTreeMap::new();
    for (city, names) in targets.cities() {
        hits_per_city.insert(city.to_string(), city_hits(&run.ranked_names(city), names, k));
    }
    let total_hits = hits_per_city.values().sum();
    let denominator = targets.total();
    let accuracy_exact = Fraction { numerator: total_hits, denominator };
    RunAccuracy {
        model: run.model.clone(),
        mode: run.mode.clone(),
        hits_per_city,
        total_hits,
        denominator,
        accuracy_display: accuracy_exact.display_truncated(DISPLAY_DECIMALS),
        accuracy_exact,
    }
}

/// Per-run accuracies plus pooled and per-run means, in input order.
pub fn build_report(runs: &[ModelRun], targets: &TargetSet, k: usize) -> Result<AccuracyReport> {
    if runs.is_empty() {
        return Err(Error::Invariant("no model runs to evaluate".into()));
    }
    if k == 0 {
        return Err(Error::Invariant("evaluation depth k must be at least 1".into()));
    }
    let per_run: Vec<RunAccuracy> = runs.iter().map(|run| run_accuracy(run, targets, k)).collect();

    let pooled = Fraction::new(
        per_run.iter().map(|r| r.total_hits).sum(),
        per_run.iter().map(|r| r.denominator).sum(),
    )?;

    let sum = per_run
        .iter()
        .map(|r| Ratio::new(u128::from(r.total_hits), u128::from(r.denominator)))
        .fold(Ratio::from_integer(0u128), |acc, x| acc + x);
    let mean = sum / Ratio::from_integer(per_run.len() as u128);
    let mean_fraction = Fraction::new(
        u64::try_from(*mean.numer()).map_err(|e| Error::Invariant(e.to_string()))?,
        u64::try_from(*mean.denom()).map_err(|e| Error::Invariant(e.to_string()))?,
    )?;

    Ok(AccuracyReport {
        k,
        per_run,
        overall_mean_display: pooled.display_truncated(DISPLAY_DECIMALS),
        overall_mean_exact: pooled,
        per_run_mean_exact: mean_fraction.to_string(),
        per_run_mean_display: mean_fraction.display_truncated(DISPLAY_DECIMALS),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Recommendation;

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn run(cities: &[(&str, &[&str])]) -> ModelRun {
        ModelRun {
            model: "m".into(),
            mode: "x".into(),
            per_city: cities
                .iter()
                .map(|(c, names)| {
                    let recs = names
                        .iter()
                        .map(|n| Recommendation { name: n.to_string(), label: n.to_string(), kits: 1 })
                        .collect();
                    (c.to_string(), recs)
                })
                .collect(),
        }
    }

    fn nine_targets() -> TargetSet {
        TargetSet::new(
            [
                ("chicago", set(&["englewood", "west englewood", "austin"])),
                ("nyc", set(&["greenpoint", "borough park", "bedford stuyvesant"])),
                ("dc", set(&["20011", "20020", "20002"])),
            ]
            .into_iter()
            .map(|(c, s)| (c.to_string(), s))
            .collect(),
        )
        .unwrap()
    }

    #[test]
    fn partial_overlap() {
        let targets = set(&["englewood", "west englewood", "austin"]);
        assert_eq!(city_hits(&["austin", "englewood", "north lawndale"], &targets, 3), 2);
    }

    #[test]
    fn full_overlap_any_order() {
        let targets = set(&["englewood", "west englewood", "austin"]);
        assert_eq!(city_hits(&["west englewood", "austin", "englewood"], &targets, 3), 3);
    }

    #[test]
    fn no_overlap() {
        let targets = set(&["greenpoint", "borough park", "bedford stuyvesant"]);
        let recs = ["hunts point mott haven", "high bridge morrisania", "crotona tremont"];
        assert_eq!(city_hits(&recs, &targets, 3), 0);
    }

    #[test]
    fn duplicates_and_depth() {
        let targets = set(&["a", "b"]);
        assert_eq!(city_hits(&["a", "a", "a"], &targets, 3), 1);
        assert_eq!(city_hits(&["c", "d", "e", "a"], &targets, 3), 0);
        assert_eq!(city_hits(&["b", "a"], &targets, 1), 1);
        assert_eq!(city_hits::<&str>(&[], &targets, 3), 0);
    }

    #[test]
    fn missing_cities_still_count_in_denominator() {
        let acc = run_accuracy(&run(&[]), &nine_targets(), 3);
        assert_eq!((acc.total_hits, acc.denominator), (0, 9));
        assert_eq!(acc.accuracy_display, "0.00");
    }

    #[test]
    fn single_perfect_run() {
        let perfect = run(&[
            ("chicago", &["austin", "englewood", "west englewood"]),
            ("nyc", &["greenpoint", "borough park", "bedford stuyvesant"]),
            ("dc", &["20002", "20011", "20020"]),
        ]);
        let report = build_report(&[perfect], &nine_targets(), 3).unwrap();
        assert_eq!(report.overall_mean_display, "1.00");
    }

    #[test]
    fn pooled_mean_of_three_and_six_ninths() {
        let three = run(&[("chicago", &["austin", "englewood", "west englewood"])]);
        let six = run(&[
            ("chicago", &["austin", "englewood", "west englewood"]),
            ("nyc", &["greenpoint", "borough park", "bedford stuyvesant"]),
        ]);
        let report = build_report(&[three, six], &nine_targets(), 3).unwrap();
        assert_eq!(report.overall_mean_exact.to_string(), "9/18");
        assert_eq!(report.overall_mean_display, "0.50");
        assert_eq!(report.per_run_mean_exact, "1/2");
    }

    #[test]
    fn rejects_empty_runs() {
        assert!(build_report(&[], &nine_targets(), 3).is_err());
    }
}
