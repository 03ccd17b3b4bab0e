//! Seeded Monte Carlo trials over the full pipeline: sample, transform,
//! plan, thin, measure.
//!
//! Reproducibility is the organizing principle. Every trial owns a stream
//! seed derived from `(master_seed, trial_index)` by a fixed mixing rule, so
//! a sweep's output is a pure function of its configuration no matter how
//! many threads ran it or in what order the trials finished.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{plan_thinning, proof_bound, theorem_bound};
use crate::discrepancy::bridge_profile;
use crate::distributions::{transform_to_uniform, ContinuousDistribution, DistributionSpec};
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::thinning::{thin_offline, OnlineThinner};

/// Shortfall coefficient for runs that must not leave deficient bins:
/// the chance of any bin falling short is below `n^-4`.
pub const CONSERVATIVE_C_LAMBDA: f64 = crate::bounds::DEFAULT_C_LAMBDA;

/// Shortfall coefficient for runs that favor visible smoothing over safety
/// margin: ten times more bins than the conservative setting at the same
/// budget, at the price of a small chance of deficient bins.
pub const AGGRESSIVE_C_LAMBDA: f64 = 1.0;

/// The 64-bit finalizer of the splitmix generator: an invertible mix whose
/// outputs pass standard equidistribution batteries.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream seed for one trial. XOR with the trial index is a bijection for
/// fixed `master_seed` and splitmix64 is a bijection outright, so distinct
/// trial indices always get distinct seeds.
pub fn derive_seed(master_seed: u64, trial_index: u64) -> u64 {
    splitmix64(master_seed ^ trial_index)
}

/// Whether a trial thins with the whole sample in hand or point by point in
/// arrival order. Both paths keep the same per-bin counts on any input with
/// no deficient bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Offline,
    Online,
}

/// One experiment: `n` draws from `distribution`, thinned under budget `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub n: u64,
    pub m: u64,
    pub c_lambda: f64,
    pub distribution: DistributionSpec,
    pub master_seed: u64,
    pub mode: Mode,
}

/// Everything measured in one trial. The two bound fields are recomputed
/// from `(n, m)` and the realized kept set; nothing is copied out of the
/// planner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub seed_used: u64,
    pub disc_before: f64,
    pub disc_after: f64,
    pub n_kept: u64,
    pub deletions: u64,
    pub deficient_count: u64,
    /// Headline guarantee `100 ln(n) / m`, reported at `m = 1` when the
    /// budget is zero.
    pub theorem_bound_value: f64,
    /// Certified bound `10 sqrt(ln(n_kept * k)) / sqrt(n_kept * k)` at the
    /// realized kept count, with `k = 1` for a no-deletion plan.
    pub proof_bound_value: f64,
}

/// Runs one seeded trial: derive the seed, draw `n` points in arrival
/// order, carry them to the unit interval through the distribution's CDF,
/// plan, thin per `config.mode`, and measure both sides.
///
/// The deletion randomness of the offline path continues on the same stream
/// after the `n` draws, so a `(config, trial_index)` pair pins down the
/// entire trial.
pub fn run_trial(config: &TrialConfig, trial_index: u64) -> Result<TrialRecord> {
    let plan = plan_thinning(config.n, config.m, config.c_lambda)?;
    let seed_used = derive_seed(config.master_seed, trial_index);
    let mut rng = ChaCha12Rng::seed_from_u64(seed_used);
    let raw = config.distribution.sample(config.n as usize, &mut rng);

    let report = match config.mode {
        Mode::Offline => {
            let ps = transform_to_uniform(&raw, &config.distribution)?;
            thin_offline(&ps, &plan, &mut rng)?.1
        }
        Mode::Online => {
            let mut thinner = OnlineThinner::new(&plan);
            let mut accepted = Vec::with_capacity(raw.len());
            for &x in &raw {
                let u = config.distribution.cdf(x);
                if thinner.offer(u)?.is_accept() {
                    accepted.push(u);
                }
            }
            thinner.finish(&PointSet::from_unsorted(accepted)?)?
        }
    };

    Ok(TrialRecord {
        trial_index,
        seed_used,
        disc_before: report.discrepancy_before,
        disc_after: report.discrepancy_after,
        n_kept: report.n_kept,
        deletions: report.deletions(),
        deficient_count: report.deficient_bins.len() as u64,
        theorem_bound_value: theorem_bound(config.n as f64, config.m.max(1) as f64),
        proof_bound_value: proof_bound(report.n_kept as f64, plan.k().unwrap_or(1) as f64),
    })
}

/// One sweep row: the budget it ran under plus the full trial record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub m: u64,
    #[serde(flatten)]
    pub trial: TrialRecord,
}

/// Location and spread of the discrepancies at one budget, plus the
/// fraction of its trials whose `disc_after` exceeded the certified bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetSummary {
    pub median_disc_before: f64,
    pub q10_disc_before: f64,
    pub q90_disc_before: f64,
    pub median_disc_after: f64,
    pub q10_disc_after: f64,
    pub q90_disc_after: f64,
    pub violation_rate: f64,
}

/// Sweep configuration as echoed into the result: the shared trial settings
/// plus the grid that was run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: u64,
    pub c_lambda: f64,
    pub distribution: DistributionSpec,
    pub master_seed: u64,
    pub mode: Mode,
    pub trials: u64,
    pub m_values: Vec<u64>,
}

/// A full sweep: configuration, every record, per-budget summaries keyed by
/// `m`, and the overall bound-violation rate. The summaries and the rate are
/// pure functions of the records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub records: Vec<SweepRecord>,
    pub summary: BTreeMap<u64, BudgetSummary>,
    pub violation_rate: f64,
}

impl SweepResult {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("sweep result serializes");
        s.push('\n');
        s
    }

    /// One record per row: `m` first, then the trial fields in declaration
    /// order, floats at full round-trip precision.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "m,trial_index,seed_used,disc_before,disc_after,n_kept,deletions,\
             deficient_count,theorem_bound_value,proof_bound_value\n",
        );
        for r in &self.records {
            let t = &r.trial;
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                r.m,
                t.trial_index,
                t.seed_used,
                t.disc_before,
                t.disc_after,
                t.n_kept,
                t.deletions,
                t.deficient_count,
                t.theorem_bound_value,
                t.proof_bound_value,
            ));
        }
        s
    }
}

/// Quantile by linear interpolation between order statistics at rank
/// `(len - 1) * q`, matching the common statistical-package default.
pub fn quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::domain("quantile of an empty slice".to_string()));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain(format!("quantile level must be in [0,1], got {q}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    Ok(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

pub fn median(values: &[f64]) -> Result<f64> {
    quantile(values, 0.5)
}

/// Thread count for sweeps: `THINPOINT_THREADS` when set (a positive
/// integer; anything else is a domain error), otherwise the machine's
/// available parallelism.
pub fn sweep_threads() -> Result<usize> {
    match std::env::var("THINPOINT_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1)),
        Err(std::env::VarError::NotUnicode(_)) => Err(Error::domain(
            "THINPOINT_THREADS is not valid unicode".to_string(),
        )),
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| {
                Error::domain(format!(
                    "THINPOINT_THREADS must be a positive integer, got {s:?}"
                ))
            }),
    }
}

/// Runs `trials` trials at every budget in `m_values`, threaded per
/// [`sweep_threads`]. `base.m` is ignored; each cell runs at its own `m`
/// with the globally unique trial index `m_position * trials + j`, so no
/// two cells share a seed.
pub fn run_sweep(base: &TrialConfig, trials: u64, m_values: &[u64]) -> Result<SweepResult> {
    run_sweep_with_threads(base, trials, m_values, sweep_threads()?)
}

/// [`run_sweep`] with an explicit thread count. The output is identical for
/// every `threads >= 1`.
pub fn run_sweep_with_threads(
    base: &TrialConfig,
    trials: u64,
    m_values: &[u64],
    threads: usize,
) -> Result<SweepResult> {
    if trials == 0 {
        return Err(Error::domain("a sweep needs at least one trial per budget".to_string()));
    }
    if m_values.is_empty() {
        return Err(Error::domain("a sweep needs at least one budget".to_string()));
    }
    // Surface invalid budgets before any sampling happens.
    for &m in m_values {
        plan_thinning(base.n, m, base.c_lambda)?;
    }

    let total = m_values.len() * trials as usize;
    let mut slots: Vec<Option<Result<SweepRecord>>> = Vec::new();
    slots.resize_with(total, || None);
    let threads = threads.clamp(1, total);
    let chunk_len = total.div_ceil(threads);

    std::thread::scope(|scope| {
        for (chunk_idx, chunk) in slots.chunks_mut(chunk_len).enumerate() {
            scope.spawn(move || {
                for (offset, slot) in chunk.iter_mut().enumerate() {
                    let global = chunk_idx * chunk_len + offset;
                    let m = m_values[global / trials as usize];
                    let config = TrialConfig { m, ..*base };
                    *slot = Some(
                        run_trial(&config, global as u64).map(|trial| SweepRecord { m, trial }),
                    );
                }
            });
        }
    });

    let records = slots
        .into_iter()
        .map(|slot| slot.expect("every slot is filled by its thread"))
        .collect::<Result<Vec<_>>>()?;

    let (summary, violation_rate) = summarize(&records, m_values)?;
    Ok(SweepResult {
        config: SweepConfig {
            n: base.n,
            c_lambda: base.c_lambda,
            distribution: base.distribution,
            master_seed: base.master_seed,
            mode: base.mode,
            trials,
            m_values: m_values.to_vec(),
        },
        records,
        summary,
        violation_rate,
    })
}

fn summarize(
    records: &[SweepRecord],
    m_values: &[u64],
) -> Result<(BTreeMap<u64, BudgetSummary>, f64)> {
    let mut summary = BTreeMap::new();
    for &m in m_values {
        let before: Vec<f64> = records
            .iter()
            .filter(|r| r.m == m)
            .map(|r| r.trial.disc_before)
            .collect();
        let after: Vec<f64> = records
            .iter()
            .filter(|r| r.m == m)
            .map(|r| r.trial.disc_after)
            .collect();
        let violations = records
            .iter()
            .filter(|r| r.m == m && r.trial.disc_after > r.trial.proof_bound_value)
            .count();
        summary.insert(
            m,
            BudgetSummary {
                median_disc_before: quantile(&before, 0.5)?,
                q10_disc_before: quantile(&before, 0.1)?,
                q90_disc_before: quantile(&before, 0.9)?,
                median_disc_after: quantile(&after, 0.5)?,
                q10_disc_after: quantile(&after, 0.1)?,
                q90_disc_after: quantile(&after, 0.9)?,
                violation_rate: violations as f64 / before.len() as f64,
            },
        );
    }
    let violations = records
        .iter()
        .filter(|r| r.trial.disc_after > r.trial.proof_bound_value)
        .count();
    Ok((summary, violations as f64 / records.len() as f64))
}

/// Writes the bridge profiles of two point sets to `<base>.before.csv` and
/// `<base>.after.csv`, returning both paths. Both sets must be non-empty.
pub fn emit_profiles(
    before: &PointSet,
    after: &PointSet,
    base: &Path,
) -> Result<(PathBuf, PathBuf)> {
    if before.is_empty() || after.is_empty() {
        return Err(Error::domain(
            "profiles need non-empty point sets on both sides".to_string(),
        ));
    }
    let with_suffix = |suffix: &str| {
        let mut os = base.as_os_str().to_owned();
        os.push(suffix);
        PathBuf::from(os)
    };
    let before_path = with_suffix(".before.csv");
    let after_path = with_suffix(".after.csv");
    bridge_profile(before).write_csv(&before_path)?;
    bridge_profile(after).write_csv(&after_path)?;
    Ok((before_path, after_path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_config(n: u64, m: u64, seed: u64) -> TrialConfig {
        TrialConfig {
            n,
            m,
            c_lambda: CONSERVATIVE_C_LAMBDA,
            distribution: DistributionSpec::Uniform01,
            master_seed: seed,
            mode: Mode::Offline,
        }
    }

    #[test]
    fn splitmix64_reference_values() {
        assert_eq!(splitmix64(0), 16294208416658607535);
        assert_eq!(splitmix64(1), 10451216379200822465);
        assert_eq!(splitmix64(0xDEADBEEF), 5395234354446855067);
    }

    #[test]
    fn derived_seeds_are_distinct_and_fixed() {
        assert_eq!(derive_seed(42, 1), 13432527470776545160);
        assert_eq!(derive_seed(42, 7), 17864077645780634326);
        assert_eq!(derive_seed(0, 0), splitmix64(0));
        let mut seen = std::collections::HashSet::new();
        for index in 0..10_000u64 {
            assert!(seen.insert(derive_seed(99, index)), "collision at {index}");
        }
    }

    #[test]
    fn quantile_examples() {
        let data = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(quantile(&data, 0.1).unwrap(), 1.3);
        assert_eq!(quantile(&data, 0.5).unwrap(), 2.5);
        assert_eq!(quantile(&data, 0.9).unwrap(), 3.7);
        let five = [5.0, 1.0, 4.0, 2.0, 3.0];
        assert_eq!(quantile(&five, 0.1).unwrap(), 1.4);
        assert_eq!(median(&five).unwrap(), 3.0);
        assert_eq!(quantile(&five, 0.9).unwrap(), 4.6);
        assert_eq!(quantile(&[2.5], 0.0).unwrap(), 2.5);
        assert_eq!(quantile(&[2.5], 1.0).unwrap(), 2.5);
        assert!(quantile(&[], 0.5).is_err());
        assert!(quantile(&[1.0], 1.5).is_err());
    }

    #[test]
    fn trial_is_deterministic_and_self_consistent() {
        let config = uniform_config(20_000, 2_000, 5);
        let a = run_trial(&config, 3).unwrap();
        let b = run_trial(&config, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trial_index, 3);
        assert_eq!(a.seed_used, derive_seed(5, 3));
        assert!(a.deletions <= 2_000);
        assert_eq!(a.n_kept + a.deletions, 20_000);
        assert!(a.disc_after > 0.0 && a.disc_after <= 1.0);
        assert_eq!(
            a.theorem_bound_value,
            theorem_bound(20_000.0, 2_000.0)
        );
        let plan = plan_thinning(20_000, 2_000, CONSERVATIVE_C_LAMBDA).unwrap();
        assert_eq!(
            a.proof_bound_value,
            proof_bound(a.n_kept as f64, plan.k().unwrap() as f64)
        );
        assert_eq!(a.deficient_count, 0);
    }

    #[test]
    fn trial_below_threshold_deletes_nothing() {
        let config = uniform_config(1_000, 10, 11);
        let record = run_trial(&config, 0).unwrap();
        assert_eq!(record.deletions, 0);
        assert_eq!(record.n_kept, 1_000);
        assert_eq!(record.disc_before, record.disc_after);
    }

    #[test]
    fn online_trial_keeps_as_many_points_as_offline() {
        let offline = uniform_config(20_000, 2_000, 17);
        let online = TrialConfig { mode: Mode::Online, ..offline };
        let a = run_trial(&offline, 0).unwrap();
        let b = run_trial(&online, 0).unwrap();
        assert_eq!(a.disc_before, b.disc_before);
        assert_eq!(a.n_kept, b.n_kept);
        assert_eq!(a.deficient_count, b.deficient_count);
    }

    #[test]
    fn trial_works_for_nonuniform_distributions() {
        let config = TrialConfig {
            distribution: DistributionSpec::normal(2.0, 3.0).unwrap(),
            ..uniform_config(20_000, 2_000, 23)
        };
        let record = run_trial(&config, 0).unwrap();
        assert!(record.disc_after <= record.proof_bound_value);
        assert!(record.deletions <= 2_000);
    }

    #[test]
    fn single_cell_sweep_wraps_run_trial() {
        let base = uniform_config(20_000, 0, 29);
        let sweep = run_sweep_with_threads(&base, 1, &[1_500], 1).unwrap();
        assert_eq!(sweep.records.len(), 1);
        let expected = run_trial(&TrialConfig { m: 1_500, ..base }, 0).unwrap();
        assert_eq!(sweep.records[0].trial, expected);
        assert_eq!(sweep.records[0].m, 1_500);
    }

    #[test]
    fn sweep_output_is_thread_count_invariant() {
        let base = uniform_config(20_000, 0, 31);
        let one = run_sweep_with_threads(&base, 3, &[1_500, 2_000], 1).unwrap();
        let three = run_sweep_with_threads(&base, 3, &[1_500, 2_000], 3).unwrap();
        let many = run_sweep_with_threads(&base, 3, &[1_500, 2_000], 64).unwrap();
        assert_eq!(one, three);
        assert_eq!(one, many);
    }

    #[test]
    fn sweep_cells_never_share_a_seed() {
        let base = uniform_config(20_000, 0, 37);
        let sweep = run_sweep_with_threads(&base, 4, &[0, 1_500, 2_000], 2).unwrap();
        let seeds: std::collections::HashSet<u64> =
            sweep.records.iter().map(|r| r.trial.seed_used).collect();
        assert_eq!(seeds.len(), sweep.records.len());
    }

    #[test]
    fn sweep_summary_is_recomputable_from_records() {
        let base = uniform_config(20_000, 0, 41);
        let sweep = run_sweep_with_threads(&base, 5, &[1_500, 2_000], 2).unwrap();
        assert!((0.0..=1.0).contains(&sweep.violation_rate));
        for (&m, stats) in &sweep.summary {
            let after: Vec<f64> = sweep
                .records
                .iter()
                .filter(|r| r.m == m)
                .map(|r| r.trial.disc_after)
                .collect();
            assert_eq!(after.len(), 5);
            assert_eq!(stats.median_disc_after, quantile(&after, 0.5).unwrap());
            assert_eq!(stats.q10_disc_after, quantile(&after, 0.1).unwrap());
            assert_eq!(stats.q90_disc_after, quantile(&after, 0.9).unwrap());
            assert!(stats.q10_disc_after <= stats.median_disc_after);
            assert!(stats.median_disc_after <= stats.q90_disc_after);
        }
    }

    #[test]
    fn sweep_rejects_degenerate_grids() {
        let base = uniform_config(20_000, 0, 43);
        assert!(run_sweep_with_threads(&base, 0, &[1_500], 1).is_err());
        assert!(run_sweep_with_threads(&base, 1, &[], 1).is_err());
        // One invalid budget poisons the whole sweep before any trial runs.
        assert!(run_sweep_with_threads(&base, 1, &[1_500, 5_000], 1).is_err());
    }

    #[test]
    fn sweep_json_shape() {
        let base = uniform_config(20_000, 0, 47);
        let sweep = run_sweep_with_threads(&base, 2, &[1_500], 1).unwrap();
        let json: serde_json::Value = serde_json::from_str(&sweep.to_json()).unwrap();
        for field in ["config", "records", "summary", "violation_rate"] {
            assert!(json.get(field).is_some(), "missing {field}");
        }
        assert_eq!(json["config"]["n"], 20_000);
        assert_eq!(json["config"]["mode"], "offline");
        assert_eq!(json["config"]["distribution"], "uniform");
        assert_eq!(json["config"]["m_values"][0], 1_500);
        let record = &json["records"][0];
        for field in ["m", "trial_index", "seed_used", "disc_before", "disc_after"] {
            assert!(record.get(field).is_some(), "missing record field {field}");
        }
        assert!(json["summary"]["1500"]["median_disc_after"].is_f64());

        let back: SweepResult = serde_json::from_str(&sweep.to_json()).unwrap();
        assert_eq!(back, sweep);
    }

    #[test]
    fn sweep_csv_has_one_row_per_record() {
        let base = uniform_config(20_000, 0, 53);
        let sweep = run_sweep_with_threads(&base, 2, &[1_500, 2_000], 1).unwrap();
        let csv = sweep.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + sweep.records.len());
        assert!(lines[0].starts_with("m,trial_index,seed_used,disc_before"));
        assert!(lines[1].starts_with("1500,0,"));
    }

    #[test]
    fn profiles_land_next_to_the_requested_base() {
        let dir = crate::test_scratch_dir("harness-profiles");
        let before = PointSet::from_unsorted(vec![0.1, 0.4, 0.9]).unwrap();
        let after = PointSet::from_unsorted(vec![0.25, 0.75]).unwrap();
        let (before_path, after_path) =
            emit_profiles(&before, &after, &dir.join("run")).unwrap();
        assert_eq!(before_path, dir.join("run.before.csv"));
        assert_eq!(after_path, dir.join("run.after.csv"));
        let text = std::fs::read_to_string(&after_path).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("i,position,deviation\n"));
    }

    #[test]
    fn identical_sets_emit_identical_profiles() {
        let dir = crate::test_scratch_dir("harness-profiles-eq");
        let ps = PointSet::from_unsorted(vec![0.2, 0.5, 0.8]).unwrap();
        let (before_path, after_path) = emit_profiles(&ps, &ps, &dir.join("same")).unwrap();
        assert_eq!(
            std::fs::read_to_string(before_path).unwrap(),
            std::fs::read_to_string(after_path).unwrap()
        );
    }

    #[test]
    fn profiles_reject_empty_sides() {
        let dir = crate::test_scratch_dir("harness-profiles-empty");
        let ps = PointSet::from_unsorted(vec![0.5]).unwrap();
        let empty = PointSet::from_unsorted(vec![]).unwrap();
        assert!(emit_profiles(&ps, &empty, &dir.join("x")).is_err());
        assert!(emit_profiles(&empty, &ps, &dir.join("x")).is_err());
    }
}
