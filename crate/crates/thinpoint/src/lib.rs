//! Regularize a random sample on the unit interval by deleting a few points.
//!
//! An i.i.d. uniform sample of size `n` sits at Kolmogorov-Smirnov distance
//! roughly `sqrt(ln n / n)` from the uniform distribution. Given a deletion
//! budget `m`, this crate partitions `[0,1]` into `k` equal bins, trims every
//! bin down to a common count, and returns a subset of at least `n - m` points
//! whose distance is of order `ln n / m` instead. A streaming variant makes
//! the same accept/reject calls one arrival at a time, and a CDF transform
//! extends the guarantee to samples from any continuous distribution.
//!
//! Start with [`bounds::plan_thinning`] and [`thinning::thin_offline`]:
//!
//! ```
//! use rand::SeedableRng;
//! use thinpoint::bounds::{plan_thinning, proof_bound, DEFAULT_C_LAMBDA};
//! use thinpoint::distributions::DistributionSpec;
//! use thinpoint::thinning::thin_offline;
//!
//! let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(1);
//! let sample = DistributionSpec::Uniform01.sample_points(100_000, &mut rng)?;
//! let plan = plan_thinning(100_000, 5_000, DEFAULT_C_LAMBDA)?;
//! let (kept, report) = thin_offline(&sample, &plan, &mut rng)?;
//! assert!(kept.n() >= 95_000);
//! assert!(report.discrepancy_after < report.discrepancy_before);
//! let certified = proof_bound(kept.n() as f64, plan.k().unwrap() as f64);
//! assert!(report.discrepancy_after < certified);
//! # Ok::<(), thinpoint::Error>(())
//! ```
//!
//! Runnable walkthroughs live in `examples/`, one per capability:
//!
//! * `compute_discrepancy` -- KS statistics and bridge profiles of a sample
//! * `plan_budgets` -- how the planner picks bin counts across budgets
//! * `thin_offline` -- full offline pipeline with its audit report
//! * `online_stream` -- streaming accept/reject decisions, one point at a time
//! * `cdf_transform` -- thinning normal and exponential samples via their CDFs
//! * `tail_bounds` -- the probability bounds behind the construction
//! * `budget_sweep` -- Monte Carlo sweep over deletion budgets
//! * `bridge_profiles` -- before/after bridge profile CSVs for plotting
//!
//! Run one with `cargo run -p thinpoint --example thin_offline`. The same
//! functionality is scriptable through the `thinpoint` binary; see `README.md`.

pub mod bounds;
pub mod cli;
pub mod discrepancy;
pub mod distributions;
mod error;
pub mod harness;
pub mod pointset;
pub mod thinning;

pub use error::{Error, Result};
pub use pointset::{BinIndex, PointSet};

#[cfg(test)]
pub(crate) fn test_scratch_dir(tag: &str) -> std::path::PathBuf {
    use std::sync::atomic::{AtomicU64, Ordering};
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let dir = std::env::temp_dir().join(format!(
        "thinpoint-{tag}-{}-{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&dir).expect("scratch dir is creatable");
    dir
}
