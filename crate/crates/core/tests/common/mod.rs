//! Test-only oracles, independent of the library's floating-point paths.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

fn exact(v: f64) -> BigRational {
    BigRational::from_f64(v).expect("finite input")
}

/// Pearson correlation with every sum computed in exact rational arithmetic.
///
/// Only the final square root is taken in floating point, on a correctly
/// rounded r², so the result is within a few ulps of the true value.
pub fn exact_pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let n = BigRational::from_integer(BigInt::from(x.len()));
    let xs: Vec<BigRational> = x.iter().map(|&v| exact(v)).collect();
    let ys: Vec<BigRational> = y.iter().map(|&v| exact(v)).collect();
    let mx = xs.iter().fold(BigRational::zero(), |acc, v| acc + v) / &n;
    let my = ys.iter().fold(BigRational::zero(), |acc, v| acc + v) / &n;
    let mut sxy = BigRational::zero();
    let mut sxx = BigRational::zero();
    let mut syy = BigRational::zero();
    for (a, b) in xs.iter().zip(&ys) {
        let dx = a - &mx;
        let dy = b - &my;
        sxy += &dx * &dy;
        sxx += &dx * &dx;
        syy += &dy * &dy;
    }
    if sxx.is_zero() || syy.is_zero() {
        return None;
    }
    let r2 = (&sxy * &sxy) / (sxx * syy);
    let magnitude = r2.to_f64()?.sqrt();
    Some(if sxy.is_negative() { -magnitude } else { magnitude })
}

/// Reference Priority Score pipeline written directly from the definition:
/// min-max normalize each column, weight, scale so the top score is 10.
/// Returns (name, raw, scaled) sorted by raw descending then name.
pub fn reference_scores(rows: &[(String, f64, f64, f64)], alpha: f64, beta: f64, gamma: f64) -> Vec<(String, f64, f64)> {
    let norm = |col: Vec<f64>| -> Vec<f64> {
        let lo = col.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        col.iter().map(|v| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 }).collect()
    };
    let p = norm(rows.iter().map(|r| r.1).collect());
    let u = norm(rows.iter().map(|r| r.2).collect());
    let h = norm(rows.iter().map(|r| r.3).collect());
    let mut out: Vec<(String, f64, f64)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.0.clone(), alpha * p[i] + beta * u[i] + gamma * h[i], 0.0))
        .collect();
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    let max = out[0].1;
    for row in &mut out {
        row.2 = if max > 0.0 { 10.0 * row.1 / max } else { 0.0 };
    }
    out
}
