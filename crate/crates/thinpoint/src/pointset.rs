//! Sorted multisets of points in `[0,1]` and their partition into equal bins.
//!
//! The bin rule is fixed once for the whole crate: with `k` bins, bin `ell`
//! (1-based) is `[(ell-1)/k, ell/k)`, except the last bin which closes at 1.
//! Assignment is computed as `min(k, floor(x * k) + 1)` in f64 arithmetic, so
//! every implementation of the rule agrees bit-for-bit on where a boundary
//! value lands.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// A multiset of points in `[0,1]`, kept sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    values: Vec<f64>,
}

impl PointSet {
    /// Sorts `values` and validates that every entry lies in `[0,1]`.
    ///
    /// Duplicates are allowed; the input is a multiset. Rejects NaN and
    /// out-of-range entries, naming the offending index and value.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        for (index, &v) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(format!(
                    "point {v} at index {index} is outside [0,1]"
                )));
            }
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(PointSet { values })
    }

    /// Like [`PointSet::from_unsorted`] but requires the input to already be
    /// sorted ascending, which skips the sort.
    pub fn from_sorted(values: Vec<f64>) -> Result<Self> {
        for (index, &v) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(format!(
                    "point {v} at index {index} is outside [0,1]"
                )));
            }
            if index > 0 && values[index - 1] > v {
                return Err(Error::domain(format!(
                    "points are not sorted: value {v} at index {index} follows {}",
                    values[index - 1]
                )));
            }
        }
        Ok(PointSet { values })
    }

    /// Number of points, counted with multiplicity.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The points, sorted ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Per-bin occupancy under the crate's bin rule; the result has length `k`
    /// and sums to `n()`.
    pub fn bin_counts(&self, k: u64) -> Vec<u64> {
        let mut counts = vec![0u64; k as usize];
        for &v in &self.values {
            counts[(bin_index(v, k).ell() - 1) as usize] += 1;
        }
        counts
    }

    /// Largest uncovered stretch of `[0,1]`: the maximum over the gap before
    /// the first point, the consecutive gaps, and the gap after the last.
    ///
    /// Errors on an empty set.
    pub fn max_gap(&self) -> Result<f64> {
        if self.values.is_empty() {
            return Err(Error::domain("max_gap of an empty point set".to_string()));
        }
        let mut best = self.values[0];
        for w in self.values.windows(2) {
            best = best.max(w[1] - w[0]);
        }
        Ok(best.max(1.0 - self.values[self.values.len() - 1]))
    }
}

/// A 1-based bin label `ell` out of `k` equal bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinIndex {
    ell: u64,
    k: u64,
}

impl BinIndex {
    /// 1-based bin label, `1 <= ell <= k`.
    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// Total number of bins.
    pub fn k(&self) -> u64 {
        self.k
    }
}

/// Assigns `x` in `[0,1]` to one of `k >= 1` bins: `min(k, floor(x*k) + 1)`.
///
/// `x = 1` lands in bin `k` via the `min`. Panics on arguments outside the
/// stated domain; callers validate their inputs first.
pub fn bin_index(x: f64, k: u64) -> BinIndex {
    assert!(k >= 1, "bin_index needs at least one bin");
    assert!((0.0..=1.0).contains(&x), "bin_index argument {x} outside [0,1]");
    let ell = ((x * k as f64).floor() as u64 + 1).min(k);
    BinIndex { ell, k }
}

/// Reads the crate's point-file format: one decimal real per line, with blank
/// lines and lines starting with `#` ignored.
///
/// Values are returned in file order, unvalidated against `[0,1]`; some
/// callers hold raw samples on the real line. Parse failures carry the
/// 1-based line number.
pub fn read_point_file(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        action: "read",
        path: path.to_path_buf(),
        source,
    })?;
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| Error::PointFile {
            path: path.to_path_buf(),
            line: i + 1,
            message: format!("expected a decimal real, found {line:?}"),
        })?;
        if !v.is_finite() {
            return Err(Error::PointFile {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("value {line} is not finite"),
            });
        }
        values.push(v);
    }
    Ok(values)
}

/// Writes values in the point-file format, one per line, via a temporary file
/// renamed into place so a failure never leaves a partial output.
pub fn write_point_file(path: &Path, values: &[f64]) -> Result<()> {
    let mut text = String::new();
    for v in values {
        writeln!(text, "{v}").expect("string write cannot fail");
    }
    write_atomic(path, text.as_bytes())
}

/// Writes `bytes` to `path` through a sibling temporary file plus rename.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |action: &'static str| {
        let path = path.to_path_buf();
        move |source| Error::Io { action, path, source }
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let mut file = fs::File::create(&tmp).map_err(io_err("write"))?;
    file.write_all(bytes)
        .and_then(|_| file.flush())
        .map_err(io_err("write"))?;
    drop(file);
    fs::rename(&tmp, path).map_err(|source| {
        let _ = fs::remove_file(&tmp);
        io_err("rename temporary file to")(source)
    })
}
