//! Tail bounds behind the thinning construction, and the budget planner.
//!
//! The construction splits `[0,1]` into `k` bins, expects about `n/k` points
//! per bin, and trims every bin to `cap = floor(n/k - lambda)` with
//! `lambda = sqrt(c_lambda * n * ln n / k)`. Everything here quantifies the
//! two ways that can go wrong: a bin falling short of `cap` (Chernoff), and
//! the kept points sitting unevenly inside their bins (DKW), plus the
//! headline `100 ln(n) / m` guarantee those two bounds combine into.
//!
//! All logarithms are natural.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default shortfall coefficient. `c_lambda = 10` makes a deficient bin an
/// event of probability at most `n^-4`; smaller values thin more aggressively
/// at the price of occasional deficient bins.
pub const DEFAULT_C_LAMBDA: f64 = 10.0;

/// Chernoff lower-tail bound `P(X <= (1-delta) mu) <= exp(-delta^2 mu / 2)`
/// for a sum of independent 0/1 variables with mean `mu`.
pub fn chernoff_lower_tail(mu: f64, delta: f64) -> Result<f64> {
    if !mu.is_finite() || mu <= 0.0 {
        return Err(Error::domain(format!(
            "chernoff_lower_tail needs a positive mean, got mu = {mu}"
        )));
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::domain(format!(
            "chernoff_lower_tail needs delta in [0,1), got {delta}"
        )));
    }
    Ok((-delta * delta * mu / 2.0).exp())
}

/// Union bound on any of `k` bins holding fewer than `n/k - lambda` of `n`
/// uniform points: `min(1, k * exp(-lambda^2 k / (2n)))`.
///
/// With `lambda = sqrt(10 n ln(n) / k)` the exponential is exactly `n^-5`,
/// so the union over `k <= n` bins stays below `n^-4`.
pub fn binning_failure_prob(n: u64, k: u64, lambda: f64) -> f64 {
    assert!(n >= 1, "binning_failure_prob needs n >= 1");
    assert!(k >= 1 && k <= n, "binning_failure_prob needs 1 <= k <= n");
    assert!(
        lambda.is_finite() && lambda >= 0.0,
        "binning_failure_prob needs lambda >= 0, got {lambda}"
    );
    let per_bin = (-lambda * lambda * k as f64 / (2.0 * n as f64)).exp();
    (k as f64 * per_bin).min(1.0)
}

/// Dvoretzky-Kiefer-Wolfowitz tail: `P(sup |F_n - F| > eps) <= 2 exp(-2 n eps^2)`,
/// clamped to 1.
pub fn dkw_tail(n: u64, eps: f64) -> f64 {
    assert!(n >= 1, "dkw_tail needs n >= 1");
    assert!(
        eps.is_finite() && eps >= 0.0,
        "dkw_tail needs eps >= 0, got {eps}"
    );
    (2.0 * (-2.0 * n as f64 * eps * eps).exp()).min(1.0)
}

/// Survival function of the Kolmogorov distribution,
/// `P(K > z) = 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 z^2)`.
///
/// The alternating series is summed until the next term falls below 1e-16 of
/// the running sum, which bounds the truncation error by that fraction; the
/// relative rule keeps the far tail accurate, where even the leading term is
/// tiny. Below `z = 0.04` the series converges too slowly to be worth running
/// and the true value is 1 to within less than 1e-300, so the function
/// returns 1 there.
pub fn kolmogorov_sf(z: f64) -> f64 {
    assert!(z.is_finite() && z >= 0.0, "kolmogorov_sf needs z >= 0, got {z}");
    if z < 0.04 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1u64.. {
        let term = 2.0 * (-2.0 * (j * j) as f64 * z * z).exp();
        // Terms decrease in j, so the partial sums stay positive and the
        // first time this trips the remainder really is negligible.
        if term <= sum * 1e-16 {
            break;
        }
        sum += sign * term;
        sign = -sign;
    }
    sum.clamp(0.0, 1.0)
}

/// The headline guarantee `100 ln(n) / m` on the discrepancy of the kept set.
///
/// Arguments are real so the algebraic sanity cases (`n = e`) are expressible;
/// requires `n >= 2` and `m >= 1`.
pub fn theorem_bound(n: f64, m: f64) -> f64 {
    assert!(n >= 2.0, "theorem_bound needs n >= 2, got {n}");
    assert!(m >= 1.0, "theorem_bound needs m >= 1, got {m}");
    100.0 * n.ln() / m
}

/// The bound the construction actually certifies for a kept set of `kept`
/// points in `k` bins: `10 sqrt(ln(kept * k)) / sqrt(kept * k)`.
///
/// Holds for the thinned set except with probability `2 (kept * k)^-200`.
/// Requires `kept >= 1`, `k >= 1`, and `kept * k >= 2`; decreasing in the
/// product once `kept * k > e`.
pub fn proof_bound(kept: f64, k: f64) -> f64 {
    assert!(kept >= 1.0, "proof_bound needs kept >= 1, got {kept}");
    assert!(k >= 1.0, "proof_bound needs k >= 1, got {k}");
    let mk = kept * k;
    assert!(mk >= 2.0, "proof_bound needs kept * k >= 2, got {mk}");
    10.0 * mk.ln().sqrt() / mk.sqrt()
}

/// How a deletion budget is spent: either the sample is left alone, or it is
/// split into `k` bins and every bin is trimmed to `cap` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime")]
pub enum Regime {
    /// Budget too small to buy an improvement; keep all points.
    NoDeletion,
    /// Trim each of `k` bins down to `cap = floor(n/k - lambda)` points.
    Thin { k: u64, lambda: f64, cap: u64 },
}

/// A thinning plan for a sample of `n` points under a deletion budget `m`.
///
/// Plans from [`plan_thinning`] additionally satisfy `k <= n/(100 c_lambda ln n)`
/// (equivalently `lambda <= n/(10k)`) and `max_deletions <= m`; manually built
/// plans only promise the structural facts `cap >= 1` and `n - k*cap <= m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThinningPlan {
    pub n: u64,
    pub m: u64,
    /// Shortfall coefficient the plan was derived from. For manual plans this
    /// is the implied value `lambda^2 k / (n ln n)`.
    pub c_lambda: f64,
    /// Deletions if every bin meets its cap: `n - k*cap`, 0 when not thinning.
    pub max_deletions: u64,
    #[serde(flatten)]
    pub regime: Regime,
}

impl ThinningPlan {
    /// Builds a plan with explicit `k` and `cap`, validating only the
    /// structural invariants: `k >= 1`, `1 <= cap <= n/k`, `n >= 2`, and
    /// `n - k*cap <= m`.
    pub fn manual(n: u64, m: u64, k: u64, cap: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("manual plan needs n >= 2, got {n}")));
        }
        if k < 1 || cap < 1 {
            return Err(Error::domain(format!(
                "manual plan needs k >= 1 and cap >= 1, got k = {k}, cap = {cap}"
            )));
        }
        let Some(planned_kept) = k.checked_mul(cap).filter(|&kc| kc <= n) else {
            return Err(Error::domain(format!(
                "manual plan cap {cap} exceeds n/k = {}",
                n as f64 / k as f64
            )));
        };
        let max_deletions = n - planned_kept;
        if max_deletions > m {
            return Err(Error::domain(format!(
                "manual plan would delete {max_deletions} points, over the budget m = {m}"
            )));
        }
        let lambda = n as f64 / k as f64 - cap as f64;
        let c_lambda = lambda * lambda * k as f64 / ((n as f64) * (n as f64).ln());
        Ok(ThinningPlan {
            n,
            m,
            c_lambda,
            max_deletions,
            regime: Regime::Thin { k, lambda, cap },
        })
    }

    pub fn is_thin(&self) -> bool {
        matches!(self.regime, Regime::Thin { .. })
    }

    pub fn k(&self) -> Option<u64> {
        match self.regime {
            Regime::Thin { k, .. } => Some(k),
            Regime::NoDeletion => None,
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match self.regime {
            Regime::Thin { lambda, .. } => Some(lambda),
            Regime::NoDeletion => None,
        }
    }

    pub fn cap(&self) -> Option<u64> {
        match self.regime {
            Regime::Thin { cap, .. } => Some(cap),
            Regime::NoDeletion => None,
        }
    }
}

/// Chooses how to spend a deletion budget `m` on a sample of size `n`.
///
/// Below the threshold `m < sqrt(c_lambda * n * ln n)` no deletion helps and
/// the plan keeps everything. Otherwise the planner starts from
/// `k0 = min( floor(m^2 / (c_lambda n ln n)), floor(n / (100 c_lambda ln n)) )`
/// and scans `k` downward until `n - k * floor(n/k - lambda(k)) <= m` with a
/// cap of at least one point per bin, falling back to no deletion when even
/// `k = 1` does not fit.
///
/// The second term of `k0` keeps `lambda <= n/(10k)`, so the cap never eats
/// more than a tenth of a bin's expected count; at the default `c_lambda`
/// it reads `n/(1000 ln n)`. The same inequality makes any feasible budget
/// satisfy `m <= n/10`, and larger budgets are rejected as a domain error.
/// For fixed `n` the chosen `k` is non-decreasing in `m`.
pub fn plan_thinning(n: u64, m: u64, c_lambda: f64) -> Result<ThinningPlan> {
    if n < 2 {
        return Err(Error::domain(format!("plan_thinning needs n >= 2, got {n}")));
    }
    if !c_lambda.is_finite() || c_lambda <= 0.0 {
        return Err(Error::domain(format!(
            "plan_thinning needs a positive c_lambda, got {c_lambda}"
        )));
    }
    let nf = n as f64;
    let mf = m as f64;
    if mf > nf / 10.0 {
        return Err(Error::domain(format!(
            "deletion budget m = {m} exceeds n/10 = {}; the construction supports \
             budgets up to a tenth of the sample",
            nf / 10.0
        )));
    }

    let ln_n = nf.ln();
    let cnl = c_lambda * nf * ln_n;
    let no_deletion = ThinningPlan {
        n,
        m,
        c_lambda,
        max_deletions: 0,
        regime: Regime::NoDeletion,
    };
    if mf < cnl.sqrt() {
        return Ok(no_deletion);
    }

    let k_cap = (nf / (100.0 * c_lambda * ln_n)).floor() as u64;
    let k_budget = (mf * mf / cnl).floor() as u64;
    let mut k = k_budget.min(k_cap);
    while k >= 1 {
        let lambda = (cnl / k as f64).sqrt();
        debug_assert!(lambda <= nf / (10.0 * k as f64) + 1e-9);
        let cap_f = nf / k as f64 - lambda;
        if cap_f >= 1.0 {
            let cap = cap_f.floor() as u64;
            let max_deletions = n - k * cap;
            if max_deletions <= m {
                return Ok(ThinningPlan {
                    n,
                    m,
                    c_lambda,
                    max_deletions,
                    regime: Regime::Thin { k, lambda, cap },
                });
            }
        }
        k -= 1;
    }
    Ok(no_deletion)
}
