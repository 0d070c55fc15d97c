//! Shared domain types.
//!
//! Every container validates on construction and is immutable afterwards.
//! The only silent repair anywhere is the clamping of a negative coverage
//! correlation in [`WeightConfig`], which is recorded in the config itself.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How neighborhoods are identified in a city's source data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitKind {
    NamedArea,
    ZipCode,
}

/// Registry entry describing one city.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CityProfile {
    pub id: String,
    pub label: String,
    /// Elevated blood-lead cutoff in µg/dL. Metadata only.
    pub bll_threshold_ug_dl: f64,
    pub unit_kind: UnitKind,
}

/// The set of cities a dataset may belong to.
#[derive(Debug, Clone, PartialEq)]
pub struct CityRegistry {
    profiles: BTreeMap<String, CityProfile>,
}

impl Default for CityRegistry {
    fn default() -> Self {
        let mut registry = Self { profiles: BTreeMap::new() };
        for (id, label, threshold, unit_kind) in [
            ("chicago", "Chicago", 5.0, UnitKind::NamedArea),
            ("nyc", "New York City", 5.0, UnitKind::NamedArea),
            ("dc", "Washington, D.C.", 3.5, UnitKind::ZipCode),
        ] {
            registry.profiles.insert(
                id.to_string(),
                CityProfile {
                    id: id.to_string(),
                    label: label.to_string(),
                    bll_threshold_ug_dl: threshold,
                    unit_kind,
                },
            );
        }
        registry
    }
}

impl CityRegistry {
    pub fn register(&mut self, profile: CityProfile) {
        self.profiles.insert(normalize_city_id(&profile.id), profile);
    }

    pub fn get(&self, id: &str) -> Result<&CityProfile> {
        self.profiles
            .get(&normalize_city_id(id))
            .ok_or_else(|| Error::UnknownCity(id.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.profiles.keys().map(String::as_str)
    }
}

pub(crate) fn normalize_city_id(id: &str) -> String {
    id.trim().to_lowercase()
}

/// Raw metrics for one neighborhood.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeighborhoodRecord {
    name: String,
    display_name: String,
    prevalence: f64,
    untested_pct: f64,
    public_coverage_pct: f64,
    extra_factors: BTreeMap<String, f64>,
}

impl NeighborhoodRecord {
    /// `name` must already be canonical; `display_name` is the spelling shown in reports.
    pub fn new(
        name: impl Into<String>,
        display_name: impl Into<String>,
        prevalence: f64,
        untested_pct: f64,
        public_coverage_pct: f64,
        extra_factors: BTreeMap<String, f64>,
    ) -> Result<Self> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(Error::InvalidName(name));
        }
        if !(prevalence.is_finite() && prevalence >= 0.0) {
            return Err(Error::Invariant(format!("{name}: prevalence must be a non-negative number, got {prevalence}")));
        }
        for (label, value) in [("untested_pct", untested_pct), ("public_coverage_pct", public_coverage_pct)] {
            if !(0.0..=100.0).contains(&value) {
                return Err(Error::Invariant(format!(
                    "{name}: {label} percentage out of range [0,100], got {value}"
                )));
            }
        }
        if let Some((k, v)) = extra_factors.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Invariant(format!("{name}: factor {k} is not finite ({v})")));
        }
        let display_name = display_name.into();
        let display_name = if display_name.trim().is_empty() { name.clone() } else { display_name.trim().to_string() };
        Ok(Self {
            name,
            display_name,
            prevalence,
            untested_pct,
            public_coverage_pct,
            extra_factors,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn display_name(&self) -> &str {
        &self.display_name
    }

    /// Elevated-BLL cases per 1,000 tests.
    pub fn prevalence(&self) -> f64 {
        self.prevalence
    }

    pub fn untested_pct(&self) -> f64 {
        self.untested_pct
    }

    pub fn public_coverage_pct(&self) -> f64 {
        self.public_coverage_pct
    }

    pub fn extra_factors(&self) -> &BTreeMap<String, f64> {
        &self.extra_factors
    }

    /// Looks up a core metric by its CSV column name, or an extra factor.
    pub fn factor(&self, column: &str) -> Option<f64> {
        match column {
            crate::ingest::COL_PREVALENCE => Some(self.prevalence),
            crate::ingest::COL_UNTESTED => Some(self.untested_pct),
            crate::ingest::COL_PUBLIC_COVERAGE => Some(self.public_coverage_pct),
            other => self.extra_factors.get(other).copied(),
        }
    }
}

/// A validated set of neighborhoods for one city.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CityDataset {
    city: CityProfile,
    records: Vec<NeighborhoodRecord>,
}

impl CityDataset {
    pub fn new(city: CityProfile, records: Vec<NeighborhoodRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Invariant(format!("dataset for {} has no records", city.id)));
        }
        let mut seen = BTreeSet::new();
        for record in &records {
            if !seen.insert(record.name()) {
                return Err(Error::Invariant(format!("duplicate neighborhood {:?}", record.name())));
            }
            if city.unit_kind == UnitKind::ZipCode && !is_zip(record.name()) {
                return Err(Error::Invariant(format!(
                    "{:?} is not a 5-digit ZIP code but {} uses ZIP units",
                    record.name(),
                    city.id
                )));
            }
        }
        Ok(Self { city, records })
    }

    pub fn city(&self) -> &CityProfile {
        &self.city
    }

    pub fn records(&self) -> &[NeighborhoodRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Names of all extra factor columns present on at least one record.
    pub fn factor_names(&self) -> BTreeSet<&str> {
        self.records
            .iter()
            .flat_map(|r| r.extra_factors.keys().map(String::as_str))
            .collect()
    }
}

fn is_zip(name: &str) -> bool {
    name.len() == 5 && name.bytes().all(|b| b.is_ascii_digit())
}

/// Which weight-derivation rule is applied to the coverage correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightVariant {
    /// gamma = r * (1 - alpha)
    #[default]
    Text,
    /// gamma = r
    Algorithm,
}

impl fmt::Display for WeightVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightVariant::Text => "text",
            WeightVariant::Algorithm => "algorithm",
        })
    }
}

impl std::str::FromStr for WeightVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "text" => Ok(Self::Text),
            "algorithm" => Ok(Self::Algorithm),
            other => Err(format!("unknown weight variant {other:?} (expected text or algorithm)")),
        }
    }
}

/// Priority Score weights together with the correlation they came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightConfigRepr")]
pub struct WeightConfig {
    alpha: f64,
    variant: WeightVariant,
    gamma: f64,
    beta: f64,
    source_correlation: f64,
    clamped: bool,
}

#[derive(Deserialize)]
struct WeightConfigRepr {
    alpha: f64,
    variant: WeightVariant,
    gamma: f64,
    beta: f64,
    source_correlation: f64,
}

impl TryFrom<WeightConfigRepr> for WeightConfig {
    type Error = Error;

    fn try_from(repr: WeightConfigRepr) -> Result<Self> {
        let derived = WeightConfig::derive(repr.source_correlation, repr.alpha, repr.variant)?;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12;
        if !close(derived.gamma, repr.gamma) || !close(derived.beta, repr.beta) {
            return Err(Error::Invariant(format!(
                "weights (beta={}, gamma={}) do not follow from r={} alpha={} under the {} rule",
                repr.beta, repr.gamma, repr.source_correlation, repr.alpha, repr.variant
            )));
        }
        Ok(derived)
    }
}

impl WeightConfig {
    /// Derives beta and gamma from the coverage/prevalence correlation.
    ///
    /// A negative correlation is clamped to zero and flagged via [`clamped`](Self::clamped).
    pub fn derive(r: f64, alpha: f64, variant: WeightVariant) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
        if !(-1.0..=1.0).contains(&r) {
            return Err(Error::InvalidCorrelation(r));
        }
        let clamped_r = r.clamp(0.0, 1.0);
        let gamma = match variant {
            WeightVariant::Text => clamped_r * (1.0 - alpha),
            WeightVariant::Algorithm => clamped_r,
        };
        let beta = (1.0 - alpha) * (1.0 - gamma);
        Ok(Self {
            alpha,
            variant,
            gamma,
            beta,
            source_correlation: r,
            clamped: r < 0.0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn variant(&self) -> WeightVariant {
        self.variant
    }

    pub fn source_correlation(&self) -> f64 {
        self.source_correlation
    }

    /// True when a negative correlation was clamped to zero.
    pub fn clamped(&self) -> bool {
        self.clamped
    }

    /// (alpha, beta, gamma) as applied, optionally rescaled to sum to one.
    pub fn coefficients(&self, normalize: bool) -> [f64; 3] {
        let raw = [self.alpha, self.beta, self.gamma];
        if !normalize {
            return raw;
        }
        let sum: f64 = raw.iter().sum();
        raw.map(|w| w / sum)
    }
}

/// One row of a [`PriorityRanking`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub name: String,
    pub display_name: String,
    pub raw_score: f64,
    pub scaled_score: f64,
    pub prevalence: f64,
    pub untested_pct: f64,
    pub public_coverage_pct: f64,
}

/// Neighborhoods in descending Priority Score order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PriorityRankingRepr")]
pub struct PriorityRanking {
    city: String,
    weights: WeightConfig,
    weights_normalized: bool,
    entries: Vec<RankedEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

#[derive(Deserialize)]
struct PriorityRankingRepr {
    city: String,
    weights: WeightConfig,
    #[serde(default)]
    weights_normalized: bool,
    entries: Vec<RankedEntry>,
    #[serde(default)]
    warnings: Vec<String>,
}

impl TryFrom<PriorityRankingRepr> for PriorityRanking {
    type Error = Error;

    fn try_from(repr: PriorityRankingRepr) -> Result<Self> {
        let ranking = PriorityRanking {
            city: repr.city,
            weights: repr.weights,
            weights_normalized: repr.weights_normalized,
            entries: repr.entries,
            warnings: repr.warnings,
        };
        ranking.check()?;
        Ok(ranking)
    }
}

/// Raw/scaled ordering used everywhere: score descending, then name ascending.
pub(crate) fn ranking_order(a_score: f64, a_name: &str, b_score: f64, b_name: &str) -> std::cmp::Ordering {
    b_score.total_cmp(&a_score).then_with(|| a_name.as_bytes().cmp(b_name.as_bytes()))
}

impl PriorityRanking {
    /// Sorts `scored` (name, display, raw score, P, U, H) and attaches 0–10 scaled scores.
    pub(crate) fn from_raw_scores(
        city: String,
        weights: WeightConfig,
        weights_normalized: bool,
        mut entries: Vec<RankedEntry>,
        mut warnings: Vec<String>,
    ) -> Result<Self> {
        entries.sort_by(|a, b| ranking_order(a.raw_score, &a.name, b.raw_score, &b.name));
        let max_raw = entries.first().map(|e| e.raw_score).unwrap_or(0.0);
        if max_raw > 0.0 {
            for entry in &mut entries {
                entry.scaled_score = 10.0 * (entry.raw_score / max_raw);
            }
        } else {
            warnings.push("all raw priority scores are zero; scaled scores set to 0".to_string());
            for entry in &mut entries {
                entry.scaled_score = 0.0;
            }
        }
        let ranking = Self {
            city,
            weights,
            weights_normalized,
            entries,
            warnings,
        };
        ranking.check()?;
        Ok(ranking)
    }

    fn check(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::Invariant("ranking has no entries".into()));
        }
        let mut names = BTreeSet::new();
        for entry in &self.entries {
            if !names.insert(entry.name.as_str()) {
                return Err(Error::Invariant(format!("duplicate ranking entry {:?}", entry.name)));
            }
            if !entry.raw_score.is_finite() || entry.raw_score < 0.0 {
                return Err(Error::Invariant(format!("{}: raw score {} is not a non-negative number", entry.name, entry.raw_score)));
            }
            if !(0.0..=10.0).contains(&entry.scaled_score) {
                return Err(Error::Invariant(format!("{}: scaled score {} outside [0, 10]", entry.name, entry.scaled_score)));
            }
        }
        for pair in self.entries.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if ranking_order(a.raw_score, &a.name, b.raw_score, &b.name) != std::cmp::Ordering::Less {
                return Err(Error::Invariant(format!("ranking out of order at {:?}", b.name)));
            }
            if a.scaled_score < b.scaled_score {
                return Err(Error::Invariant(format!("scaled order differs from raw order at {:?}", b.name)));
            }
        }
        let top = &self.entries[0];
        if top.raw_score > 0.0 && top.scaled_score != 10.0 {
            return Err(Error::Invariant(format!("top scaled score is {} rather than 10", top.scaled_score)));
        }
        Ok(())
    }

    pub fn city(&self) -> &str {
        &self.city
    }

    pub fn weights(&self) -> &WeightConfig {
        &self.weights
    }

    pub fn weights_normalized(&self) -> bool {
        self.weights_normalized
    }

    pub fn entries(&self) -> &[RankedEntry] {
        &self.entries
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AllocationStrategy {
    #[default]
    Proportional,
    TopKEqual,
    RankWeighted,
}

impl fmt::Display for AllocationStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AllocationStrategy::Proportional => "proportional",
            AllocationStrategy::TopKEqual => "top_k_equal",
            AllocationStrategy::RankWeighted => "rank_weighted",
        })
    }
}

impl std::str::FromStr for AllocationStrategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "proportional" => Ok(Self::Proportional),
            "top_k_equal" => Ok(Self::TopKEqual),
            "rank_weighted" => Ok(Self::RankWeighted),
            other => Err(format!(
                "unknown strategy {other:?} (expected proportional, top_k_equal or rank_weighted)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Allocation {
    pub name: String,
    pub display_name: String,
    pub kits: u64,
}

/// Integer kit counts per neighborhood, in ranking order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AllocationPlan {
    city: String,
    total_kits: u64,
    strategy: AllocationStrategy,
    method: &'static str,
    floor: u64,
    allocations: Vec<Allocation>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

impl AllocationPlan {
    pub(crate) fn new(
        city: String,
        total_kits: u64,
        strategy: AllocationStrategy,
        method: &'static str,
        floor: u64,
        allocations: Vec<Allocation>,
        warnings: Vec<String>,
    ) -> Result<Self> {
        let sum: u64 = allocations.iter().map(|a| a.kits).sum();
        if sum != total_kits {
            return Err(Error::Invariant(format!("allocations sum to {sum}, expected {total_kits}")));
        }
        Ok(Self {
            city,
            total_kits,
            strategy,
            method,
            floor,
            allocations,
            warnings,
        })
    }

    pub fn city(&self) -> &str {
        &self.city
    }

    pub fn total_kits(&self) -> u64 {
        self.total_kits
    }

    pub fn strategy(&self) -> AllocationStrategy {
        self.strategy
    }

    /// Integerization method, e.g. "largest-remainder (Hamilton)".
    pub fn method(&self) -> &str {
        self.method
    }

    pub fn floor(&self) -> u64 {
        self.floor
    }

    pub fn allocations(&self) -> &[Allocation] {
        &self.allocations
    }

    pub fn kits(&self) -> Vec<u64> {
        self.allocations.iter().map(|a| a.kits).collect()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// One line of a recorded model recommendation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Recommendation {
    pub name: String,
    pub label: String,
    pub kits: u64,
}

/// A recorded allocation recommendation from an external model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelRun {
    pub model: String,
    pub mode: String,
    /// City id to recommendations, rank 1 first.
    pub per_city: BTreeMap<String, Vec<Recommendation>>,
}

impl ModelRun {
    pub fn label(&self) -> String {
        format!("{} ({})", self.model, self.mode)
    }

    pub fn ranked_names(&self, city: &str) -> Vec<&str> {
        self.per_city
            .get(city)
            .map(|recs| recs.iter().map(|r| r.name.as_str()).collect())
            .unwrap_or_default()
    }
}

/// Empirically designated high-risk neighborhoods per city.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TargetSet {
    per_city: BTreeMap<String, BTreeSet<String>>,
}

impl TargetSet {
    pub fn new(per_city: BTreeMap<String, BTreeSet<String>>) -> Result<Self> {
        if per_city.is_empty() {
            return Err(Error::Invariant("target set lists no cities".into()));
        }
        if let Some((city, _)) = per_city.iter().find(|(_, names)| names.is_empty()) {
            return Err(Error::Invariant(format!("target set for {city} is empty")));
        }
        Ok(Self { per_city })
    }

    pub fn cities(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.per_city.iter().map(|(c, n)| (c.as_str(), n))
    }

    pub fn get(&self, city: &str) -> Option<&BTreeSet<String>> {
        self.per_city.get(city)
    }

    /// Sum of target-set sizes across cities.
    pub fn total(&self) -> u64 {
        self.per_city.values().map(|s| s.len() as u64).sum()
    }
}

/// An unreduced non-negative fraction such as 6/9.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub numerator: u64,
    pub denominator: u64,
}

impl Fraction {
    pub fn new(numerator: u64, denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::Invariant("fraction with zero denominator".into()));
        }
        Ok(Self { numerator, denominator })
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// Decimal rendering truncated toward zero: 6/9 -> "0.66".
    pub fn display_truncated(self, decimals: u32) -> String {
        let scale = 10u128.pow(decimals);
        let scaled = self.numerator as u128 * scale / self.denominator as u128;
        let whole = scaled / scale;
        if decimals == 0 {
            return whole.to_string();
        }
        let frac = scaled % scale;
        format!("{whole}.{frac:0width$}", width = decimals as usize)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Accuracy of one model run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunAccuracy {
    pub model: String,
    pub mode: String,
    pub hits_per_city: BTreeMap<String, u64>,
    pub total_hits: u64,
    pub denominator: u64,
    pub accuracy_exact: Fraction,
    pub accuracy_display: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AccuracyReport {
    pub k: usize,
    pub per_run: Vec<RunAccuracy>,
    /// Total hits over total denominator.
    pub overall_mean_exact: Fraction,
    pub overall_mean_display: String,
    /// Unweighted mean of the per-run fractions, reduced.
    pub per_run_mean_exact: String,
    pub per_run_mean_display: String,
}
