//! Loading city datasets, recorded model runs, and target sets from disk.
//!
//! All loaders collect every problem they find into a [`ValidationReport`]
//! instead of stopping at the first one. An input is accepted iff the report
//! has no error-severity entries; warnings travel back with the parsed value.
//!
//! City dataset CSV (UTF-8, comma-delimited, header order-insensitive):
//!
//! ```text
//! # unit=percent
//! neighborhood,prevalence_per_1000,untested_pct,public_coverage_pct[,<factor>...]
//! ```
//!
//! Leading `#` lines are comments. A `unit=fraction` directive in them means
//! the two percentage columns are given on a 0–1 scale and are converted to
//! 0–100 on load.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{normalize_city_id, CityDataset, CityProfile, ModelRun, NeighborhoodRecord, Recommendation, TargetSet};
use crate::names::AliasTable;

pub const COL_NEIGHBORHOOD: &str = "neighborhood";
pub const COL_PREVALENCE: &str = "prevalence_per_1000";
pub const COL_UNTESTED: &str = "untested_pct";
pub const COL_PUBLIC_COVERAGE: &str = "public_coverage_pct";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub severity: Severity,
    /// 1-based line number in the source file, when known.
    pub row: Option<usize>,
    /// Structural location for JSON inputs, e.g. `runs[2].cities.nyc[0]`.
    pub location: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub entries: Vec<Issue>,
}

impl ValidationReport {
    fn push(&mut self, severity: Severity, row: Option<usize>, location: Option<String>, message: impl Into<String>) {
        self.entries.push(Issue {
            severity,
            row,
            location,
            message: message.into(),
        });
    }

    fn error_at_row(&mut self, row: usize, message: impl Into<String>) {
        self.push(Severity::Error, Some(row), None, message);
    }

    fn error_at(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.push(Severity::Error, None, Some(location.into()), message);
    }

    fn warn_at(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.push(Severity::Warning, None, Some(location.into()), message);
    }

    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.entries.iter().filter(|e| e.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.entries.iter().filter(|e| e.severity == Severity::Warning)
    }

    pub fn is_accepted(&self) -> bool {
        self.errors().next().is_none()
    }

    fn into_result<T>(self, value: impl FnOnce() -> Result<T>) -> Result<Parsed<T>> {
        if !self.is_accepted() {
            return Err(Error::Validation(self));
        }
        Ok(Parsed { value: value()?, report: self })
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let severity = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{severity}")?;
        if let Some(row) = self.row {
            write!(f, " (row {row})")?;
        }
        if let Some(location) = &self.location {
            write!(f, " ({location})")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.entries.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  {issue}")?;
        }
        Ok(())
    }
}

/// A successfully parsed value plus any warnings raised along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<T> {
    pub value: T,
    pub report: ValidationReport,
}

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    /// Upgrade missing-metric warnings to errors.
    pub strict: bool,
    pub aliases: AliasTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PercentUnit {
    Percent,
    Fraction,
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_city_dataset(path: impl AsRef<Path>, city: &CityProfile, options: &IngestOptions) -> Result<Parsed<CityDataset>> {
    parse_city_dataset_str(&read_file(path.as_ref())?, city, options)
}

pub fn parse_city_dataset_str(text: &str, city: &CityProfile, options: &IngestOptions) -> Result<Parsed<CityDataset>> {
    let mut report = ValidationReport::default();
    let unit = read_directives(text, &mut report);

    if text.lines().all(|l| l.trim().is_empty() || l.trim_start().starts_with('#')) {
        report.error_at_row(1, "empty file");
        return Err(Error::Validation(report));
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let headers = match reader.headers() {
        Ok(h) => h.clone(),
        Err(e) => {
            report.error_at_row(csv_line(&e).unwrap_or(1), format!("unreadable header: {e}"));
            return Err(Error::Validation(report));
        }
    };
    let header_row = text
        .lines()
        .position(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map_or(1, |i| i + 1);

    let mut columns: HashMap<&str, usize> = HashMap::new();
    for (i, name) in headers.iter().enumerate() {
        if name.is_empty() {
            report.error_at_row(header_row, format!("empty column name at position {}", i + 1));
        } else if columns.insert(name, i).is_some() {
            report.error_at_row(header_row, format!("duplicate column {name:?}"));
        }
    }
    for required in [COL_NEIGHBORHOOD, COL_PREVALENCE, COL_UNTESTED, COL_PUBLIC_COVERAGE] {
        if !columns.contains_key(required) {
            report.error_at_row(header_row, format!("missing required column {required:?}"));
        }
    }
    if !report.is_accepted() {
        return Err(Error::Validation(report));
    }
    let required = [
        columns[COL_NEIGHBORHOOD],
        columns[COL_PREVALENCE],
        columns[COL_UNTESTED],
        columns[COL_PUBLIC_COVERAGE],
    ];
    let extras: Vec<(usize, &str)> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| !required.contains(i))
        .collect();

    let mut records = Vec::new();
    let mut first_row_of: HashMap<String, usize> = HashMap::new();
    let mut data_rows = 0usize;

    for result in reader.records() {
        let row_data = match result {
            Ok(r) => r,
            Err(e) => {
                report.error_at_row(csv_line(&e).unwrap_or(0), format!("malformed CSV row: {e}"));
                continue;
            }
        };
        data_rows += 1;
        let row = row_data.position().map(|p| p.line() as usize).unwrap_or(0);
        let cell = |idx: usize| row_data.get(idx).unwrap_or("");

        let raw_name = cell(required[0]);
        let name = match options.aliases.canonicalize(raw_name) {
            Ok(n) => n,
            Err(_) => {
                report.error_at_row(row, format!("neighborhood name {raw_name:?} is empty after normalization"));
                continue;
            }
        };
        if let Some(first) = first_row_of.get(&name) {
            report.error_at_row(row, format!("duplicate neighborhood {name:?} (first seen at row {first})"));
            continue;
        }
        first_row_of.insert(name.clone(), row);

        let mut metrics = [None; 3];
        let mut row_ok = true;
        let mut missing = Vec::new();
        for (slot, (&idx, column)) in required[1..]
            .iter()
            .zip([COL_PREVALENCE, COL_UNTESTED, COL_PUBLIC_COVERAGE])
            .enumerate()
        {
            let text = cell(idx);
            if text.is_empty() {
                missing.push(column);
                continue;
            }
            let Some(mut value) = parse_number(text) else {
                report.error_at_row(row, format!("non-numeric value {text:?} in column {column:?}"));
                row_ok = false;
                continue;
            };
            if column == COL_PREVALENCE {
                if value < 0.0 {
                    report.error_at_row(row, format!("prevalence must be non-negative, got {value}"));
                    row_ok = false;
                }
            } else {
                if unit == PercentUnit::Fraction {
                    value *= 100.0;
                }
                if !(0.0..=100.0).contains(&value) {
                    report.error_at_row(row, format!("percentage out of range [0,100] in column {column:?}: {value}"));
                    row_ok = false;
                }
            }
            metrics[slot] = Some(value);
        }

        let mut factors = BTreeMap::new();
        for &(idx, column) in &extras {
            let text = cell(idx);
            if text.is_empty() {
                continue;
            }
            match parse_number(text) {
                Some(v) => {
                    factors.insert(column.to_string(), v);
                }
                None => {
                    report.error_at_row(row, format!("non-numeric value {text:?} in column {column:?}"));
                    row_ok = false;
                }
            }
        }

        if !missing.is_empty() {
            let message = format!("missing value in {}; row excluded from scoring", missing.join(", "));
            let severity = if options.strict { Severity::Error } else { Severity::Warning };
            report.push(severity, Some(row), None, message);
            continue;
        }
        if !row_ok {
            continue;
        }
        let [Some(p), Some(u), Some(h)] = metrics else { continue };
        match NeighborhoodRecord::new(name, raw_name, p, u, h, factors) {
            Ok(record) => records.push(record),
            Err(e) => report.error_at_row(row, e.to_string()),
        }
    }

    if data_rows == 0 {
        report.error_at_row(header_row, "no data rows");
    } else if records.is_empty() && report.is_accepted() {
        report.error_at_row(header_row, "every row was excluded; nothing to score");
    }
    let city = city.clone();
    report.into_result(|| CityDataset::new(city, records))
}

fn read_directives(text: &str, report: &mut ValidationReport) -> PercentUnit {
    let mut unit = PercentUnit::Percent;
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let Some(comment) = trimmed.strip_prefix('#') else { break };
        for token in comment.split_whitespace() {
            let Some((key, value)) = token.split_once('=') else { continue };
            match (key, value) {
                ("unit", "fraction") => unit = PercentUnit::Fraction,
                ("unit", "percent") => unit = PercentUnit::Percent,
                ("unit", other) => {
                    report.error_at_row(i + 1, format!("unknown unit {other:?} (expected percent or fraction)"))
                }
                _ => {}
            }
        }
    }
    unit
}

fn parse_number(text: &str) -> Option<f64> {
    text.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn csv_line(e: &csv::Error) -> Option<usize> {
    e.position().map(|p| p.line() as usize)
}

/// Writes a dataset in the same CSV schema it is read from.
pub fn write_city_dataset_csv(dataset: &CityDataset) -> Result<String> {
    let factors: Vec<&str> = dataset.factor_names().into_iter().collect();
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec![COL_NEIGHBORHOOD, COL_PREVALENCE, COL_UNTESTED, COL_PUBLIC_COVERAGE];
    header.extend(&factors);
    let csv_err = |e: csv::Error| Error::Invariant(format!("csv write failed: {e}"));
    writer.write_record(&header).map_err(csv_err)?;
    for record in dataset.records() {
        let mut row = vec![
            record.display_name().to_string(),
            record.prevalence().to_string(),
            record.untested_pct().to_string(),
            record.public_coverage_pct().to_string(),
        ];
        for factor in &factors {
            row.push(record.extra_factors().get(*factor).map(f64::to_string).unwrap_or_default());
        }
        writer.write_record(&row).map_err(csv_err)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Invariant(format!("csv write failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
}

fn parse_json(text: &str, report: &mut ValidationReport) -> Option<Value> {
    match serde_json::from_str::<Value>(text) {
        Ok(v) => Some(v),
        Err(e) => {
            report.push(Severity::Error, Some(e.line()), Some(format!("column {}", e.column())), format!("malformed JSON: {e}"));
            None
        }
    }
}

pub fn parse_model_runs(path: impl AsRef<Path>, aliases: &AliasTable) -> Result<Parsed<Vec<ModelRun>>> {
    parse_model_runs_str(&read_file(path.as_ref())?, aliases)
}

/// Parses `{"runs":[{"model":..,"mode":..,"cities":{"<city>":[{"neighborhood":..,"kits":..}]}}]}`.
pub fn parse_model_runs_str(text: &str, aliases: &AliasTable) -> Result<Parsed<Vec<ModelRun>>> {
    let mut report = ValidationReport::default();
    let Some(root) = parse_json(text, &mut report) else {
        return Err(Error::Validation(report));
    };
    let Some(runs) = root.get("runs").and_then(Value::as_array) else {
        report.error_at("$", "expected an object with a \"runs\" array");
        return Err(Error::Validation(report));
    };

    let mut parsed = Vec::with_capacity(runs.len());
    for (i, run) in runs.iter().enumerate() {
        let at = format!("runs[{i}]");
        let Some(run) = run.as_object() else {
            report.error_at(&at, "run must be an object");
            continue;
        };
        let text_field = |key: &str, report: &mut ValidationReport| match run.get(key).and_then(Value::as_str) {
            Some(s) if !s.trim().is_empty() => Some(s.trim().to_string()),
            _ => {
                report.error_at(format!("{at}.{key}"), format!("missing or empty \"{key}\" field"));
                None
            }
        };
        let model = text_field("model", &mut report);
        let mode = text_field("mode", &mut report);
        let cities = match run.get("cities") {
            Some(Value::Object(map)) => map,
            _ => {
                report.error_at(format!("{at}.cities"), "missing \"cities\" object");
                continue;
            }
        };

        let mut per_city = BTreeMap::new();
        for (city, entries) in cities {
            let city_at = format!("{at}.cities.{city}");
            let Some(entries) = entries.as_array() else {
                report.error_at(&city_at, "city recommendations must be an array");
                continue;
            };
            if entries.is_empty() {
                report.warn_at(&city_at, "no recommendations for city");
            }
            let mut recs = Vec::with_capacity(entries.len());
            for (j, entry) in entries.iter().enumerate() {
                let entry_at = format!("{city_at}[{j}]");
                let label = entry.get("neighborhood").and_then(Value::as_str);
                let name = match label.map(|l| aliases.canonicalize(l)) {
                    Some(Ok(n)) => n,
                    _ => {
                        report.error_at(&entry_at, "missing or empty \"neighborhood\"");
                        continue;
                    }
                };
                let kits = match entry.get("kits") {
                    Some(Value::Number(n)) if n.as_u64().is_some() => n.as_u64().unwrap(),
                    Some(Value::Number(n)) if n.as_i64().is_some_and(|k| k < 0) => {
                        report.error_at(&entry_at, format!("negative kits ({n})"));
                        continue;
                    }
                    Some(other) => {
                        report.error_at(&entry_at, format!("kits must be a non-negative integer, got {other}"));
                        continue;
                    }
                    None => {
                        report.error_at(&entry_at, "missing \"kits\"");
                        continue;
                    }
                };
                recs.push(Recommendation {
                    name,
                    label: label.unwrap_or_default().trim().to_string(),
                    kits,
                });
            }
            per_city.insert(normalize_city_id(city), recs);
        }
        if let (Some(model), Some(mode)) = (model, mode) {
            parsed.push(ModelRun { model, mode, per_city });
        }
    }
    report.into_result(|| Ok(parsed))
}

pub fn parse_targets(path: impl AsRef<Path>, aliases: &AliasTable) -> Result<Parsed<TargetSet>> {
    parse_targets_str(&read_file(path.as_ref())?, aliases)
}

/// Parses `{"<city>": ["name", ...]}`.
pub fn parse_targets_str(text: &str, aliases: &AliasTable) -> Result<Parsed<TargetSet>> {
    let mut report = ValidationReport::default();
    let Some(root) = parse_json(text, &mut report) else {
        return Err(Error::Validation(report));
    };
    let Some(cities) = root.as_object() else {
        report.error_at("$", "expected an object mapping city ids to name lists");
        return Err(Error::Validation(report));
    };
    if cities.is_empty() {
        report.error_at("$", "no cities listed");
    }
    let mut per_city = BTreeMap::new();
    for (city, names) in cities {
        let Some(names) = names.as_array() else {
            report.error_at(city, "expected an array of names");
            continue;
        };
        if names.is_empty() {
            report.error_at(city, "empty target set");
            continue;
        }
        let mut set = BTreeSet::new();
        for (j, raw) in names.iter().enumerate() {
            let at = format!("{city}[{j}]");
            let name = match raw.as_str().map(|s| aliases.canonicalize(s)) {
                Some(Ok(n)) => n,
                _ => {
                    report.error_at(&at, format!("invalid target name {raw}"));
                    continue;
                }
            };
            if !set.insert(name.clone()) {
                report.error_at(&at, format!("duplicate target {name:?}"));
            }
        }
        per_city.insert(normalize_city_id(city), set);
    }
    report.into_result(|| TargetSet::new(per_city))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CityRegistry;

    fn chicago() -> CityProfile {
        CityRegistry::default().get("chicago").unwrap().clone()
    }

    fn parse(text: &str) -> Result<Parsed<CityDataset>> {
        parse_city_dataset_str(text, &chicago(), &IngestOptions::default())
    }

    fn errors(err: Error) -> Vec<Issue> {
        match err {
            Error::Validation(report) => report.errors().cloned().collect(),
            other => panic!("expected validation error, got {other}"),
        }
    }

    const FIVE_ROWS: &str = "\
neighborhood,prevalence_per_1000,untested_pct,public_coverage_pct
Englewood,30.1,60,46
West Englewood,29.5,58,46
Austin,25.0,55,37
South Shore,18.2,70,42
Lincoln Park,1.2,20,8
";

    #[test]
    fn well_formed_five_rows() {
        let parsed = parse(FIVE_ROWS).unwrap();
        assert_eq!(parsed.value.len(), 5);
        assert!(parsed.report.entries.is_empty());
        let first = &parsed.value.records()[0];
        assert_eq!(first.name(), "englewood");
        assert_eq!(first.display_name(), "Englewood");
        assert_eq!(parsed.value.records()[1].name(), "west englewood");
    }

    #[test]
    fn header_order_does_not_matter_and_extras_are_kept() {
        let text = "public_coverage_pct,turbidity,neighborhood,untested_pct,prevalence_per_1000\n46,0.8,Englewood,60,30\n8,,Lincoln Park,20,1\n";
        let ds = parse(text).unwrap().value;
        assert_eq!(ds.records()[0].public_coverage_pct(), 46.0);
        assert_eq!(ds.records()[0].extra_factors()["turbidity"], 0.8);
        assert!(ds.records()[1].extra_factors().is_empty());
    }

    #[test]
    fn out_of_range_percentage_reports_row() {
        let text = "neighborhood,prevalence_per_1000,untested_pct,public_coverage_pct\nA,1,50,10\nB,2,120,10\n";
        let errs = errors(parse(text).unwrap_err());
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].row, Some(3));
        assert!(errs[0].message.contains("percentage out of range [0,100]"));
    }

    #[test]
    fn case_collision_is_duplicate() {
        let text = "neighborhood,prevalence_per_1000,untested_pct,public_coverage_pct\nEnglewood,1,50,10\nENGLEWOOD,2,40,10\n";
        let errs = errors(parse(text).unwrap_err());
        assert_eq!(errs[0].row, Some(3));
        assert!(errs[0].message.contains("duplicate neighborhood \"englewood\""));
    }

    #[test]
    fn missing_required_column() {
        let errs = errors(parse("neighborhood,prevalence_per_1000,untested_pct\nA,1,2\n").unwrap_err());
        assert!(errs[0].message.contains("public_coverage_pct"));
        assert_eq!(errs[0].row, Some(1));
    }

    #[test]
    fn non_numeric_cell() {
        let text = "neighborhood,prevalence_per_1000,untested_pct,public_coverage_pct\nA,high,50,10\n";
        let errs = errors(parse(text).unwrap_err());
        assert!(errs[0].message.contains("non-numeric"));
        assert_eq!(errs[0].row, Some(2));
    }

    #[test]
    fn empty_file() {
        for text in ["", "\n\n", "# unit=percent\n"] {
            let errs = errors(parse(text).unwrap_err());
            assert_eq!(errs[0].message, "empty file");
        }
        let errs = errors(parse("neighborhood,prevalence_per_1000,untested_pct,public_coverage_pct\n").unwrap_err());
        assert_eq!(errs[0].message, "no data rows");
    }

    #[test]
    fn missing_metric_excludes_row_with_warning_unless_strict() {
        let text = "neighborhood,prevalence_per_1000,untested_pct,public_coverage_pct\nA,1,50,10\nB,,50,10\nC,3,40,20\n";
        let parsed = parse(text).unwrap();
        assert_eq!(parsed.value.len(), 2);
        let warnings: Vec<_> = parsed.report.warnings().collect();
        assert_eq!(warnings.len(), 1);
        assert_eq!(warnings[0].row, Some(3));

        let strict = IngestOptions { strict: true, ..Default::default() };
        let err = parse_city_dataset_str(text, &chicago(), &strict).unwrap_err();
        assert_eq!(errors(err)[0].row, Some(3));
    }

    #[test]
    fn fraction_unit_directive_converts() {
        let text = "# synthetic\n# unit=fraction\nneighborhood,prevalence_per_1000,untested_pct,public_coverage_pct\nA,1,0.5,0.25\nB,2,1.2,0.1\n";
        let errs = errors(parse(text).unwrap_err());
        assert_eq!(errs[0].row, Some(5), "{errs:?}");
        let ok = parse(&text.replace("1.2", "0.4")).unwrap().value;
        assert_eq!(ok.records()[0].untested_pct(), 50.0);
        assert_eq!(ok.records()[0].public_coverage_pct(), 25.0);
    }

    #[test]
    fn quoted_fields() {
        let text = "neighborhood,prevalence_per_1000,untested_pct,public_coverage_pct\n\"Hunts Point, Mott Haven\",1,50,10\nB,2,40,10\n";
        let ds = parse(text).unwrap().value;
        assert_eq!(ds.records()[0].name(), "hunts point mott haven");
    }

    #[test]
    fn csv_round_trip() {
        let text = "neighborhood,prevalence_per_1000,untested_pct,public_coverage_pct,turbidity\n\"Hunts Point – Mott Haven\",0.1,33.333333333333336,10,\nB,2.5e-3,40,10,0.7\n";
        let ds = parse(text).unwrap().value;
        let written = write_city_dataset_csv(&ds).unwrap();
        assert_eq!(parse(&written).unwrap().value, ds);
    }

    #[test]
    fn model_runs_negative_kits() {
        let text = r#"{"runs":[{"model":"m","mode":"x","cities":{"chicago":[{"neighborhood":"Austin","kits":-5}]}}]}"#;
        let errs = errors(parse_model_runs_str(text, &AliasTable::empty()).unwrap_err());
        assert!(errs[0].message.contains("negative kits"));
        assert_eq!(errs[0].location.as_deref(), Some("runs[0].cities.chicago[0]"));
    }

    #[test]
    fn model_runs_missing_fields_and_malformed() {
        let text = r#"{"runs":[{"model":"m","cities":{}}]}"#;
        let errs = errors(parse_model_runs_str(text, &AliasTable::empty()).unwrap_err());
        assert!(errs[0].message.contains("\"mode\""));
        let errs = errors(parse_model_runs_str("{\"runs\": [", &AliasTable::empty()).unwrap_err());
        assert!(errs[0].message.starts_with("malformed JSON"));
        assert!(errs[0].row.is_some());
        assert!(parse_model_runs_str("[]", &AliasTable::empty()).is_err());
    }

    #[test]
    fn model_runs_empty_city_warns() {
        let text = r#"{"runs":[{"model":"m","mode":"x","cities":{"nyc":[]}}]}"#;
        let parsed = parse_model_runs_str(text, &AliasTable::empty()).unwrap();
        let w: Vec<_> = parsed.report.warnings().collect();
        assert_eq!(w[0].message, "no recommendations for city");
        assert!(parsed.value[0].per_city["nyc"].is_empty());
    }

    #[test]
    fn model_runs_preserve_order_and_canonicalize() {
        let text = r#"{"runs":[{"model":"m","mode":"x","cities":{"NYC":[{"neighborhood":"Hunts Point – Mott Haven","kits":3},{"neighborhood":"Borough Park","kits":9}]}}]}"#;
        let runs = parse_model_runs_str(text, &AliasTable::empty()).unwrap().value;
        assert_eq!(runs[0].ranked_names("nyc"), ["hunts point mott haven", "borough park"]);
        assert_eq!(runs[0].per_city["nyc"][0].label, "Hunts Point – Mott Haven");
    }

    #[test]
    fn targets_duplicate_and_empty() {
        let errs = errors(parse_targets_str(r#"{"chicago":["Austin","austin"]}"#, &AliasTable::empty()).unwrap_err());
        assert!(errs[0].message.contains("duplicate target"));
        assert_eq!(errs[0].location.as_deref(), Some("chicago[1]"));
        let errs = errors(parse_targets_str(r#"{"chicago":[]}"#, &AliasTable::empty()).unwrap_err());
        assert!(errs[0].message.contains("empty target set"));
    }

    #[test]
    fn em_dash_target_matches_spaced_record_name() {
        let targets = parse_targets_str(r#"{"nyc":["bedford—stuyvesant"]}"#, &AliasTable::empty()).unwrap().value;
        let nyc = CityRegistry::default().get("nyc").unwrap().clone();
        let text = "neighborhood,prevalence_per_1000,untested_pct,public_coverage_pct\nBedford Stuyvesant,1,50,10\nB,2,40,10\n";
        let ds = parse_city_dataset_str(text, &nyc, &IngestOptions::default()).unwrap().value;
        assert!(targets.get("nyc").unwrap().contains(ds.records()[0].name()));
    }
}
