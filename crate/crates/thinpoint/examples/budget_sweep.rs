// A seeded Monte Carlo sweep: the same experiment at several deletion
// budgets, many trials each, summarized per budget. Reruns reproduce the
// result byte for byte; thread count does not matter.
//
//   cargo run --release -p thinpoint --example budget_sweep

use thinpoint::distributions::DistributionSpec;
use thinpoint::harness::{run_sweep, Mode, TrialConfig, CONSERVATIVE_C_LAMBDA};

fn main() -> thinpoint::Result<()> {
    let base = TrialConfig {
        n: 100_000,
        m: 0, // replaced by each budget below
        c_lambda: CONSERVATIVE_C_LAMBDA,
        distribution: DistributionSpec::Uniform01,
        master_seed: 31,
        mode: Mode::Offline,
    };
    let budgets = [1_000u64, 3_500, 5_000, 7_500, 10_000];
    let result = run_sweep(&base, 20, &budgets)?;

    println!(
        "n = {}, {} trials per budget, seed {}",
        base.n, result.config.trials, base.master_seed
    );
    println!(
        "{:>8} {:>16} {:>16} {:>12}",
        "m", "median before", "median after", "violations"
    );
    for (&m, stats) in &result.summary {
        println!(
            "{m:>8} {:>16.6} {:>16.6} {:>12.3}",
            stats.median_disc_before, stats.median_disc_after, stats.violation_rate
        );
    }
    println!(
        "\noverall certified-bound violation rate: {:.3} over {} trials",
        result.violation_rate,
        result.records.len()
    );
    println!(
        "(budgets below the threshold sqrt(10 n ln n) = {:.0} delete nothing)",
        (10.0 * base.n as f64 * (base.n as f64).ln()).sqrt()
    );
    Ok(())
}
