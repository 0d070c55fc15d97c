//! Fixed-width text tables. Output depends only on the values passed in.

use std::fmt::Write;

use leadalloc_core::{AccuracyReport, AllocationPlan, CorrelationResult, ModelRun, PriorityRanking};

pub fn correlation_table(city: &str, results: &[CorrelationResult]) -> String {
    let width = results.iter().map(|r| r.factor.len()).max().unwrap_or(0).max("factor".len());
    let mut out = format!("city: {city}\n");
    let _ = writeln!(out, "{:<width$}  {:>6}  {:>4}", "factor", "r", "n");
    for r in results {
        let _ = writeln!(out, "{:<width$}  {:>6.2}  {:>4}", r.factor, r.r, r.n);
    }
    out
}

pub fn ranking_table(ranking: &PriorityRanking) -> String {
    let w = ranking.weights();
    let [alpha, beta, gamma] = w.coefficients(ranking.weights_normalized());
    let mut out = String::new();
    let _ = writeln!(out, "city: {}", ranking.city());
    let _ = writeln!(
        out,
        "weights: alpha={alpha:.4} beta={beta:.4} gamma={gamma:.4} (variant={}, r={:.4}{}{})",
        w.variant(),
        w.source_correlation(),
        if w.clamped() { ", clamped" } else { "" },
        if ranking.weights_normalized() { ", normalized" } else { "" },
    );
    let width = name_width(ranking.entries().iter().map(|e| e.display_name.as_str()));
    let _ = writeln!(
        out,
        "{:>4}  {:<width$}  {:>8}  {:>9}  {:>8}  {:>6}  {:>6}",
        "rank", "neighborhood", "raw PS", "scaled PS", "P", "U", "H"
    );
    for (i, e) in ranking.entries().iter().enumerate() {
        let _ = writeln!(
            out,
            "{:>4}  {:<width$}  {:>8.4}  {:>9.2}  {:>8.2}  {:>6.2}  {:>6.2}",
            i + 1,
            e.display_name,
            e.raw_score,
            e.scaled_score,
            e.prevalence,
            e.untested_pct,
            e.public_coverage_pct
        );
    }
    out
}

pub fn allocation_table(plan: &AllocationPlan) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "city: {}  kits: {}  strategy: {}  method: {}  floor: {}",
        plan.city(),
        plan.total_kits(),
        plan.strategy(),
        plan.method(),
        plan.floor()
    );
    let width = name_width(plan.allocations().iter().map(|a| a.display_name.as_str()));
    let _ = writeln!(out, "{:>4}  {:<width$}  {:>8}  {:>10}", "rank", "neighborhood", "kits", "cumulative");
    let mut cumulative = 0u64;
    for (i, a) in plan.allocations().iter().enumerate() {
        cumulative += a.kits;
        let share = 100.0 * cumulative as f64 / plan.total_kits() as f64;
        let _ = writeln!(out, "{:>4}  {:<width$}  {:>8}  {:>9.1}%", i + 1, a.display_name, a.kits, share);
    }
    let _ = writeln!(out, "{:>4}  {:<width$}  {:>8}", "", "total", cumulative);
    out
}

pub fn accuracy_table(report: &AccuracyReport, runs: &[ModelRun]) -> String {
    let labels: Vec<String> = runs.iter().map(ModelRun::label).collect();
    let width = name_width(labels.iter().map(String::as_str).chain(["mean of per-run accuracies"]));
    let cities: Vec<&str> = report
        .per_run
        .first()
        .map(|r| r.hits_per_city.keys().map(String::as_str).collect())
        .unwrap_or_default();

    let mut out = String::new();
    let _ = writeln!(out, "top-{} accuracy", report.k);
    let _ = write!(out, "{:<width$}", "model");
    for city in &cities {
        let _ = write!(out, "  {city:>7}");
    }
    let _ = writeln!(out, "  {:>6}  {:>8}", "hits", "accuracy");
    for (label, run) in labels.iter().zip(&report.per_run) {
        let _ = write!(out, "{label:<width$}");
        for city in &cities {
            let _ = write!(out, "  {:>7}", run.hits_per_city[*city]);
        }
        let _ = writeln!(out, "  {:>6}  {:>8}", run.accuracy_exact.to_string(), run.accuracy_display);
    }
    let pad = cities.len() * 9;
    let _ = writeln!(
        out,
        "{:<width$}{:pad$}  {:>6}  {:>8}",
        "overall (pooled)",
        "",
        report.overall_mean_exact.to_string(),
        report.overall_mean_display
    );
    let _ = writeln!(
        out,
        "{:<width$}{:pad$}  {:>6}  {:>8}",
        "mean of per-run accuracies", "", report.per_run_mean_exact, report.per_run_mean_display
    );
    out
}

fn name_width<'a>(names: impl Iterator<Item = &'a str>) -> usize {
    names.map(|n| n.chars().count()).max().unwrap_or(0).max("neighborhood".len())
}
