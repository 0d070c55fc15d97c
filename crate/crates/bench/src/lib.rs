//! Deterministic synthetic inputs for the benchmarks.

use std::collections::BTreeMap;

use leadalloc_core::{CityDataset, CityRegistry, NeighborhoodRecord};

/// A ZIP-free city of `n` neighborhoods with smoothly varying metrics.
pub fn synthetic_city(n: usize) -> CityDataset {
    let city = CityRegistry::default().get("chicago").expect("builtin city").clone();
    let records = (0..n)
        .map(|i| {
            let t = i as f64;
            let p = 20.0 + 19.0 * (t * 0.37).sin();
            let u = 50.0 + 45.0 * (t * 0.11).cos();
            let h = (25.0 + 20.0 * (t * 0.37 + 0.4).sin()).clamp(0.0, 100.0);
            let name = format!("area {i:05}");
            NeighborhoodRecord::new(name.clone(), name, p, u, h, BTreeMap::new()).expect("valid record")
        })
        .collect();
    CityDataset::new(city, records).expect("valid dataset")
}
