//! Kolmogorov-Smirnov distance from uniform, and bridge-style profiles.
//!
//! For a sorted multiset `x_1 <= ... <= x_n` the star discrepancy (the
//! one-sample KS statistic against the uniform law) has the closed form
//!
//! ```text
//! D*(X) = max_i max( x_i - (i-1)/n , i/n - x_i )
//! ```
//!
//! because the empirical CDF only moves at data points. The module also
//! carries a deliberately naive evaluator that walks every jump of the
//! empirical CDF; the two must agree to near machine precision, and the
//! test suites hold them against each other.

use std::path::Path;

use crate::error::{Error, Result};
use crate::pointset::{write_atomic, PointSet};

/// Star discrepancy of a non-empty point set via the sorted closed form.
///
/// The result lies in `(0, 1]`, reaching its minimum `1/(2n)` exactly at the
/// midpoint grid `(2i-1)/(2n)`. Errors on an empty set.
pub fn star_discrepancy(ps: &PointSet) -> Result<f64> {
    if ps.is_empty() {
        return Err(Error::domain(
            "star discrepancy of an empty point set".to_string(),
        ));
    }
    let n = ps.n() as f64;
    let mut best = 0.0f64;
    for (i, &x) in ps.values().iter().enumerate() {
        let below = x - i as f64 / n;
        let above = (i + 1) as f64 / n - x;
        best = best.max(below).max(above);
    }
    Ok(best)
}

/// Same statistic, evaluated the slow way as an independent cross-check.
///
/// The supremum of `|F_n(x) - x|` over `[0,1]` is attained at `x = 0`,
/// `x = 1`, or at a one-sided limit of a data point, so this evaluates
/// `|#{v <= x}/n - x|` and `|#{v < x}/n - x|` at every candidate by direct
/// counting. Quadratic in `n`; meant for validation, not production use.
pub fn star_discrepancy_bruteforce(ps: &PointSet) -> Result<f64> {
    if ps.is_empty() {
        return Err(Error::domain(
            "star discrepancy of an empty point set".to_string(),
        ));
    }
    let values = ps.values();
    let n = values.len() as f64;
    let count_le = |x: f64| values.iter().filter(|&&v| v <= x).count() as f64;
    let count_lt = |x: f64| values.iter().filter(|&&v| v < x).count() as f64;

    let mut best = 0.0f64;
    for x in [0.0, 1.0] {
        best = best.max((count_le(x) / n - x).abs());
    }
    for &x in values {
        best = best.max((count_le(x) / n - x).abs());
        best = best.max((count_lt(x) / n - x).abs());
    }
    Ok(best)
}

/// KS distance between raw samples and a claimed CDF `F`.
///
/// Implemented as the composition `star_discrepancy(F(samples))`: when `F` is
/// the true CDF of a continuous law, `F` maps the sample to uniform and the
/// two statistics coincide exactly. `F` must send every sample into `[0,1]`;
/// a value outside that range is a contract violation by the caller's CDF.
pub fn ks_vs_cdf(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::domain("KS distance of an empty sample".to_string()));
    }
    let mut mapped = Vec::with_capacity(samples.len());
    for &x in samples {
        let u = cdf(x);
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::contract(format!(
                "cdf returned {u} at sample {x}; a CDF must map into [0,1]"
            )));
        }
        mapped.push(u);
    }
    star_discrepancy(&PointSet::from_unsorted(mapped)?)
}

/// The scaled deviations `sqrt(n) * (x_(i) - i/n)` of a sorted sample.
///
/// Plotted against `i/n` this is the empirical-bridge picture of a sample:
/// for uniform data the largest absolute entry converges in law to the
/// Kolmogorov distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgeProfile {
    entries: Vec<(f64, f64)>,
}

impl BridgeProfile {
    /// `(position, deviation)` pairs, position `i/n` for `i = 1..n`.
    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    /// Largest `|deviation|`; 0 for an empty profile.
    pub fn max_abs_deviation(&self) -> f64 {
        self.entries
            .iter()
            .fold(0.0f64, |acc, &(_, d)| acc.max(d.abs()))
    }

    /// Writes `i,position,deviation` rows as CSV, atomically.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        use std::fmt::Write as _;
        let mut text = String::from("i,position,deviation\n");
        for (i, (pos, dev)) in self.entries.iter().enumerate() {
            writeln!(text, "{},{pos},{dev}", i + 1).expect("string write cannot fail");
        }
        write_atomic(path, text.as_bytes())
    }
}

/// Computes the bridge profile of a point set.
///
/// Every `|deviation|` is within `sqrt(n) * (D*(X) + 1/n)` of zero, so the
/// profile never strays far beyond what the discrepancy already reveals.
pub fn bridge_profile(ps: &PointSet) -> BridgeProfile {
    let n = ps.n() as f64;
    let scale = n.sqrt();
    let entries = ps
        .values()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let pos = (i + 1) as f64 / n;
            (pos, scale * (x - pos))
        })
        .collect();
    BridgeProfile { entries }
}
