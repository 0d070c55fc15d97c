mod common;

use std::collections::BTreeMap;
use std::io::Write;

use leadalloc_core::ingest::{parse_city_dataset, parse_model_runs, parse_targets, write_city_dataset_csv};
use leadalloc_core::{
    allocate, build_report, fixtures, pearson, score_city, AliasTable, AllocationParams, AllocationStrategy,
    CityDataset, CityRegistry, Error, IngestOptions, NeighborhoodRecord, ScoreOptions, WeightVariant,
};
use proptest::prelude::*;

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(contents.as_bytes()).unwrap();
    file
}

fn chicago() -> leadalloc_core::CityProfile {
    CityRegistry::default().get("chicago").unwrap().clone()
}

#[test]
fn csv_file_to_allocation() {
    let file = write_temp(
        "neighborhood,prevalence_per_1000,untested_pct,public_coverage_pct\n\
         North Side,2,10,5\n\
         Mid Town,20,40,60\n\
         South Side,40,70,50\n",
    );
    let parsed = parse_city_dataset(file.path(), &chicago(), &IngestOptions::default()).unwrap();
    assert!(parsed.report.is_accepted());
    let ranking = score_city(&parsed.value, &ScoreOptions::default()).unwrap();
    let names: Vec<&str> = ranking.entries().iter().map(|e| e.name.as_str()).collect();
    assert_eq!(names, ["south side", "mid town", "north side"]);
    assert_eq!(ranking.entries()[0].scaled_score, 10.0);

    let plan = allocate(&ranking, 1000, AllocationStrategy::Proportional, AllocationParams::default()).unwrap();
    assert_eq!(plan.kits().iter().sum::<u64>(), 1000);
    assert_eq!(*plan.kits().last().unwrap(), 0);
}

#[test]
fn missing_file_is_an_io_error() {
    let err = parse_city_dataset("/nonexistent/city.csv", &chicago(), &IngestOptions::default()).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
}

#[test]
fn bundled_files_match_embedded_fixtures() {
    let dir = fixtures::data_dir();
    let aliases = AliasTable::from_path(dir.join("aliases.json")).unwrap();
    let runs = parse_model_runs(dir.join("model_runs.json"), &aliases).unwrap().value;
    let targets = parse_targets(dir.join("targets.json"), &aliases).unwrap().value;
    assert_eq!(runs, fixtures::model_runs().unwrap());
    assert_eq!(targets, fixtures::targets().unwrap());
}

#[test]
fn dash_and_alias_spellings_hit_targets() {
    let aliases = fixtures::default_aliases();
    let runs = r#"{"runs": [{"model": "m", "mode": "x", "cities": {
        "nyc": [
            {"neighborhood": "Bedford–Stuyvesant", "kits": 10},
            {"neighborhood": "Boro Park", "kits": 5},
            {"neighborhood": "greenpoint", "kits": 1}
        ]
    }}]}"#;
    let targets = r#"{"nyc": ["Greenpoint", "Borough Park", "Bedford-Stuyvesant"]}"#;
    let runs = leadalloc_core::ingest::parse_model_runs_str(runs, &aliases).unwrap().value;
    let targets = leadalloc_core::ingest::parse_targets_str(targets, &aliases).unwrap().value;
    let report = build_report(&runs, &targets, 3).unwrap();
    assert_eq!(report.overall_mean_exact.to_string(), "3/3");
    assert_eq!(report.overall_mean_display, "1.00");
}

#[test]
fn matches_reference_pipeline_on_demo_data() {
    let dataset = fixtures::demo_chicago().unwrap();
    let rows: Vec<(String, f64, f64, f64)> = dataset
        .records()
        .iter()
        .map(|r| (r.name().to_string(), r.prevalence(), r.untested_pct(), r.public_coverage_pct()))
        .collect();
    let h: Vec<f64> = rows.iter().map(|r| r.3).collect();
    let p: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let r = common::exact_pearson(&h, &p).unwrap();

    for variant in [WeightVariant::Text, WeightVariant::Algorithm] {
        let ranking = score_city(&dataset, &ScoreOptions { variant, ..Default::default() }).unwrap();
        let rc = r.clamp(0.0, 1.0);
        let gamma = match variant {
            WeightVariant::Text => rc * 0.5,
            WeightVariant::Algorithm => rc,
        };
        let beta = 0.5 * (1.0 - gamma);
        let reference = common::reference_scores(&rows, 0.5, beta, gamma);
        assert_eq!(ranking.len(), reference.len());
        for (entry, (name, raw, scaled)) in ranking.entries().iter().zip(&reference) {
            assert_eq!(&entry.name, name, "{variant}");
            assert!((entry.raw_score - raw).abs() < 1e-12, "{name}: {} vs {raw}", entry.raw_score);
            assert!((entry.scaled_score - scaled).abs() < 1e-12, "{name}: {} vs {scaled}", entry.scaled_score);
        }
    }
}

#[test]
fn demo_correlations_match_oracle() {
    let dataset = fixtures::demo_chicago().unwrap();
    let frozen = [
        ("untested_pct", 0.776_612_888_272_62),
        ("public_coverage_pct", 0.851_366_474_415_500_2),
        ("turbidity_ntu", 0.976_535_850_251_397_2),
        ("renter_occupied_pct", 0.480_524_264_238_678_83),
        ("median_income_k", -0.811_982_628_842_802_7),
    ];
    let results = leadalloc_core::correlate_factors(
        &dataset,
        &frozen.iter().map(|f| f.0).collect::<Vec<_>>(),
        leadalloc_core::Estimator::Pearson,
    )
    .unwrap();
    for (result, (factor, want)) in results.iter().zip(frozen) {
        assert_eq!(result.factor, factor);
        assert!((result.r - want).abs() < 1e-12, "{factor}: {} vs {want}", result.r);
    }
}

fn dataset_strategy() -> impl Strategy<Value = CityDataset> {
    proptest::collection::btree_map(
        "[a-z]{1,8}( [a-z]{1,8})?",
        (0.0f64..200.0, 0.0f64..=100.0, 0.0f64..=100.0, proptest::option::of(-50.0f64..50.0)),
        1..20,
    )
    .prop_map(|rows| {
        let records = rows
            .into_iter()
            .map(|(name, (p, u, h, extra))| {
                let extras: BTreeMap<String, f64> = extra.map(|v| ("extra_factor".to_string(), v)).into_iter().collect();
                NeighborhoodRecord::new(name.clone(), name, p, u, h, extras).unwrap()
            })
            .collect();
        CityDataset::new(chicago(), records).unwrap()
    })
}

proptest! {
    #[test]
    fn csv_round_trip(dataset in dataset_strategy()) {
        let text = write_city_dataset_csv(&dataset).unwrap();
        let file = write_temp(&text);
        let back = parse_city_dataset(file.path(), &chicago(), &IngestOptions::default()).unwrap();
        prop_assert!(back.report.is_accepted());
        prop_assert_eq!(back.value, dataset);
    }

    #[test]
    fn pearson_matches_exact_oracle(
        (x, y) in (2usize..40).prop_flat_map(|n| (
            proptest::collection::vec(-1e4f64..1e4, n),
            proptest::collection::vec(-1e4f64..1e4, n),
        ))
    ) {
        match (pearson(&x, &y), common::exact_pearson(&x, &y)) {
            (Ok(r), Some(oracle)) => prop_assert!((r - oracle).abs() <= 1e-12, "{} vs {}", r, oracle),
            (Err(_), None) => {}
            (got, oracle) => prop_assert!(false, "{:?} vs {:?}", got, oracle),
        }
    }
}
