//! Integer apportionment of a kit budget over a ranked city.

use crate::error::{Error, Result};
use crate::model::{Allocation, AllocationPlan, AllocationStrategy, PriorityRanking};

pub const LARGEST_REMAINDER: &str = "largest-remainder (Hamilton)";
pub const EQUAL_SPLIT: &str = "equal split, leftover to higher ranks";

pub const DEFAULT_TOP_K: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AllocationParams {
    /// Number of ranks sharing the budget under `top_k_equal`.
    pub k: usize,
    /// Kits every ranked neighborhood receives before the strategy runs.
    pub floor: u64,
}

impl Default for AllocationParams {
    fn default() -> Self {
        Self { k: DEFAULT_TOP_K, floor: 0 }
    }
}

/// Hamilton apportionment of `total` units in proportion to `weights`.
///
/// Every index first gets the floor of its quota; leftover units go to the
/// largest fractional remainders. Remainder ties go to the larger weight,
/// then to the lower index. Weights must be non-negative with a positive sum.
pub fn largest_remainder(weights: &[f64], total: u64) -> Result<Vec<u64>> {
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || !sum.is_finite() || sum <= 0.0 {
        return Err(Error::InvalidAllocation("weights must be non-negative with a positive sum".into()));
    }
    let quotas: Vec<f64> = weights.iter().map(|w| total as f64 * (w / sum)).collect();
    let mut seats: Vec<u64> = quotas.iter().map(|q| q.floor() as u64).collect();
    let assigned: u64 = seats.iter().sum();
    let leftover = total.saturating_sub(assigned);

    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra)
            .then_with(|| weights[b].total_cmp(&weights[a]))
            .then(a.cmp(&b))
    });
    for &i in order.iter().filter(|&&i| weights[i] > 0.0).take(leftover as usize) {
        seats[i] += 1;
    }
    debug_assert_eq!(seats.iter().sum::<u64>(), total);
    Ok(seats)
}

/// Splits `total` evenly over `slots`, leftover units to the first slots.
fn equal_split(slots: usize, total: u64) -> Vec<u64> {
    let base = total / slots as u64;
    let extra = (total % slots as u64) as usize;
    (0..slots).map(|i| base + u64::from(i < extra)).collect()
}

pub fn allocate(
    ranking: &PriorityRanking,
    total_kits: u64,
    strategy: AllocationStrategy,
    params: AllocationParams,
) -> Result<AllocationPlan> {
    let entries = ranking.entries();
    if entries.is_empty() {
        return Err(Error::InvalidAllocation("ranking is empty".into()));
    }
    if total_kits == 0 {
        return Err(Error::InvalidAllocation("total kits must be at least 1".into()));
    }
    let n = entries.len() as u64;
    let reserved = params
        .floor
        .checked_mul(n)
        .filter(|r| *r <= total_kits)
        .ok_or_else(|| {
            Error::InvalidAllocation(format!(
                "a floor of {} kits for {n} neighborhoods exceeds the budget of {total_kits}",
                params.floor
            ))
        })?;
    let budget = total_kits - reserved;
    let mut warnings = Vec::new();

    let (shares, method) = match strategy {
        AllocationStrategy::Proportional => {
            let scores: Vec<f64> = entries.iter().map(|e| e.raw_score).collect();
            if !scores.iter().any(|s| *s > 0.0) {
                return Err(Error::InvalidAllocation(
                    "proportional allocation needs at least one positive score".into(),
                ));
            }
            (largest_remainder(&scores, budget)?, LARGEST_REMAINDER)
        }
        AllocationStrategy::RankWeighted => {
            let weights: Vec<f64> = (1..=entries.len()).map(|rank| 1.0 / rank as f64).collect();
            (largest_remainder(&weights, budget)?, LARGEST_REMAINDER)
        }
        AllocationStrategy::TopKEqual => {
            if params.k == 0 {
                return Err(Error::InvalidAllocation("k must be at least 1".into()));
            }
            let k = if params.k > entries.len() {
                warnings.push(format!(
                    "k = {} exceeds the {} ranked neighborhoods; using k = {}",
                    params.k,
                    entries.len(),
                    entries.len()
                ));
                entries.len()
            } else {
                params.k
            };
            let mut shares = equal_split(k, budget);
            shares.resize(entries.len(), 0);
            (shares, EQUAL_SPLIT)
        }
    };

    let allocations = entries
        .iter()
        .zip(shares)
        .map(|(entry, kits)| Allocation {
            name: entry.name.clone(),
            display_name: entry.display_name.clone(),
            kits: kits + params.floor,
        })
        .collect();
    AllocationPlan::new(
        ranking.city().to_string(),
        total_kits,
        strategy,
        method,
        params.floor,
        allocations,
        warnings,
    )
}
