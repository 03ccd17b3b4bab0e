//! Executing a thinning plan: trim every bin down to its cap.
//!
//! The offline path sees the whole multiset, trims each over-full bin to
//! `cap` by deleting a uniformly random subset of it, and never deletes more
//! than the budget `m` in total. Bins that come up short of `cap` are kept
//! whole and flagged as deficient; nothing is deleted elsewhere to
//! compensate. The online path makes the same per-bin decision one arrival
//! at a time: accept until the bin has `cap` points, then reject. On any
//! input where no bin ends deficient the two paths keep identical per-bin
//! counts, and since both keep uniformly random subsets within each bin they
//! induce the same distribution on kept sets.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{Regime, ThinningPlan};
use crate::discrepancy::star_discrepancy;
use crate::error::{Error, Result};
use crate::pointset::{bin_index, BinIndex, PointSet};

/// Audit record of one thinning run.
///
/// Always satisfies `n_kept = sum(per_bin_kept)`, `n_in = sum(per_bin_in)`,
/// and the hard budget `n_in - n_kept <= plan.m` for the offline path. When
/// `deficient_bins` is empty every bin holds exactly `cap` points, which
/// pins the kept empirical CDF to the true CDF at every bin boundary. For a
/// no-deletion plan the partition is trivial and the per-bin vectors have a
/// single entry.
///
/// Discrepancies of an empty set are reported as 1: a set with no mass is at
/// the far end of the KS scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThinningReport {
    pub plan: ThinningPlan,
    pub n_in: u64,
    pub n_kept: u64,
    pub per_bin_in: Vec<u64>,
    pub per_bin_kept: Vec<u64>,
    /// 1-based indices of bins whose input count fell below `cap`, ascending.
    pub deficient_bins: Vec<u64>,
    pub discrepancy_before: f64,
    pub discrepancy_after: f64,
}

impl ThinningReport {
    /// Total deletions, `n_in - n_kept`.
    pub fn deletions(&self) -> u64 {
        self.n_in - self.n_kept
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn disc_or_one(ps: &PointSet) -> Result<f64> {
    if ps.is_empty() {
        Ok(1.0)
    } else {
        star_discrepancy(ps)
    }
}

/// Thins `ps` per `plan`, returning which sorted positions survive plus the
/// report. [`thin_offline`] is the common entry point; this variant exists
/// for callers that need to carry a parallel array (for example raw samples
/// whose CDF images were thinned) through the selection.
pub fn thin_offline_indices<R: Rng + ?Sized>(
    ps: &PointSet,
    plan: &ThinningPlan,
    rng: &mut R,
) -> Result<(Vec<usize>, ThinningReport)> {
    if plan.n != ps.n() as u64 {
        return Err(Error::contract(format!(
            "plan was made for n = {} points but the input has {}",
            plan.n,
            ps.n()
        )));
    }

    let (k, cap) = match plan.regime {
        Regime::NoDeletion => {
            let disc = disc_or_one(ps)?;
            let report = ThinningReport {
                plan: *plan,
                n_in: ps.n() as u64,
                n_kept: ps.n() as u64,
                per_bin_in: vec![ps.n() as u64],
                per_bin_kept: vec![ps.n() as u64],
                deficient_bins: vec![],
                discrepancy_before: disc,
                discrepancy_after: disc,
            };
            return Ok(((0..ps.n()).collect(), report));
        }
        Regime::Thin { k, cap, .. } => (k, cap),
    };

    let per_bin_in = ps.bin_counts(k);
    let mut per_bin_kept = Vec::with_capacity(k as usize);
    let mut deficient_bins = Vec::new();
    let mut kept_indices = Vec::with_capacity(ps.n());
    // Points are sorted and the bin rule is monotone, so each bin is a
    // contiguous run of positions.
    let mut start = 0usize;
    // Deleting every over-full bin down to cap can overrun the budget when
    // other bins are deficient, so the budget is enforced as a running
    // remainder, bins served in index order.
    let mut budget = plan.m;
    for (ell0, &count) in per_bin_in.iter().enumerate() {
        let count_us = count as usize;
        if count < cap {
            deficient_bins.push(ell0 as u64 + 1);
        }
        let delete = count.saturating_sub(cap).min(budget);
        budget -= delete;
        per_bin_kept.push(count - delete);
        if delete == 0 {
            kept_indices.extend(start..start + count_us);
        } else {
            let mut dropped = vec![false; count_us];
            for offset in rand::seq::index::sample(rng, count_us, delete as usize) {
                dropped[offset] = true;
            }
            kept_indices.extend(
                (start..start + count_us).filter(|&i| !dropped[i - start]),
            );
        }
        start += count_us;
    }

    let n_kept = kept_indices.len() as u64;
    let kept_values: Vec<f64> = kept_indices.iter().map(|&i| ps.values()[i]).collect();
    let kept = PointSet::from_sorted(kept_values)?;
    let report = ThinningReport {
        plan: *plan,
        n_in: ps.n() as u64,
        n_kept,
        per_bin_in,
        per_bin_kept,
        deficient_bins,
        discrepancy_before: disc_or_one(ps)?,
        discrepancy_after: disc_or_one(&kept)?,
    };
    Ok((kept_indices, report))
}

/// Thins `ps` per `plan` with randomness drawn from `rng`.
///
/// Within each over-full bin the kept points are a uniformly random subset
/// of the planned size, chosen independently across bins; identical seed,
/// plan, and input reproduce the identical kept set. The plan must have been
/// made for exactly `ps.n()` points.
pub fn thin_offline<R: Rng + ?Sized>(
    ps: &PointSet,
    plan: &ThinningPlan,
    rng: &mut R,
) -> Result<(PointSet, ThinningReport)> {
    let (indices, report) = thin_offline_indices(ps, plan, rng)?;
    let values = indices.iter().map(|&i| ps.values()[i]).collect();
    Ok((PointSet::from_sorted(values)?, report))
}

/// Accept-or-reject verdict on one offered point, tagged with the bin the
/// point fell into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accept(BinIndex),
    Reject(BinIndex),
}

impl Decision {
    pub fn is_accept(&self) -> bool {
        matches!(self, Decision::Accept(_))
    }

    pub fn bin(&self) -> BinIndex {
        match *self {
            Decision::Accept(bin) | Decision::Reject(bin) => bin,
        }
    }
}

/// Streaming thinner: offers are judged on arrival, using only the per-bin
/// counts accepted so far.
///
/// A point is rejected exactly when its bin already holds `cap` accepted
/// points, so for i.i.d. input the kept points of a bin are the first `cap`
/// to arrive, again a uniformly distributed subset. The thinner cannot know
/// that a bin will end up deficient, so its reject count is only guaranteed
/// to stay within the budget when no bin does; the offline path is the one
/// with the unconditional budget.
///
/// Offered values are also logged so [`OnlineThinner::finish`] can fill in the
/// before side of the report; decisions never read the log.
#[derive(Debug, Clone)]
pub struct OnlineThinner {
    plan: ThinningPlan,
    accepted_per_bin: Vec<u64>,
    offered: Vec<f64>,
}

impl OnlineThinner {
    pub fn new(plan: &ThinningPlan) -> Self {
        let bins = match plan.regime {
            Regime::NoDeletion => 1,
            Regime::Thin { k, .. } => k as usize,
        };
        OnlineThinner {
            plan: *plan,
            accepted_per_bin: vec![0; bins],
            offered: Vec::new(),
        }
    }

    pub fn plan(&self) -> &ThinningPlan {
        &self.plan
    }

    /// Points offered so far.
    pub fn offered_count(&self) -> u64 {
        self.offered.len() as u64
    }

    /// Points accepted so far.
    pub fn accepted_count(&self) -> u64 {
        self.accepted_per_bin.iter().sum()
    }

    /// Judges one arrival. A point outside `[0,1]` is a domain error and
    /// leaves the state untouched.
    pub fn offer(&mut self, x: f64) -> Result<Decision> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::domain(format!(
                "offered point {x} is outside [0,1]"
            )));
        }
        match self.plan.regime {
            Regime::NoDeletion => {
                self.offered.push(x);
                self.accepted_per_bin[0] += 1;
                Ok(Decision::Accept(bin_index(x, 1)))
            }
            Regime::Thin { k, cap, .. } => {
                let bin = bin_index(x, k);
                self.offered.push(x);
                let slot = &mut self.accepted_per_bin[(bin.ell() - 1) as usize];
                if *slot < cap {
                    *slot += 1;
                    Ok(Decision::Accept(bin))
                } else {
                    Ok(Decision::Reject(bin))
                }
            }
        }
    }

    /// Closes the stream. `accepted` must be exactly the multiset of points
    /// this thinner accepted; its per-bin counts are checked against the
    /// internal counters and a mismatch is a contract error.
    pub fn finish(self, accepted: &PointSet) -> Result<ThinningReport> {
        let (k, cap) = match self.plan.regime {
            Regime::NoDeletion => (1, None),
            Regime::Thin { k, cap, .. } => (k, Some(cap)),
        };
        let recount = accepted.bin_counts(k);
        if recount != self.accepted_per_bin {
            return Err(Error::contract(format!(
                "accepted set disagrees with the thinner's counters: \
                 counted {recount:?}, expected {:?}",
                self.accepted_per_bin
            )));
        }

        let mut per_bin_in = vec![0u64; k as usize];
        for &x in &self.offered {
            per_bin_in[(bin_index(x, k).ell() - 1) as usize] += 1;
        }
        let deficient_bins = match cap {
            None => vec![],
            Some(cap) => (1..=k)
                .filter(|&ell| self.accepted_per_bin[(ell - 1) as usize] < cap)
                .collect(),
        };
        let before = PointSet::from_unsorted(self.offered)?;
        Ok(ThinningReport {
            plan: self.plan,
            n_in: before.n() as u64,
            n_kept: accepted.n() as u64,
            per_bin_in,
            per_bin_kept: self.accepted_per_bin,
            deficient_bins,
            discrepancy_before: disc_or_one(&before)?,
            discrepancy_after: disc_or_one(accepted)?,
        })
    }
}

/// Renders decisions as a compact audit string, `A` per accept and `R` per
/// reject, mostly for logs and examples.
pub fn decision_string(decisions: &[Decision]) -> String {
    let mut s = String::with_capacity(decisions.len());
    for d in decisions {
        write!(s, "{}", if d.is_accept() { 'A' } else { 'R' }).expect("string write cannot fail");
    }
    s
}
