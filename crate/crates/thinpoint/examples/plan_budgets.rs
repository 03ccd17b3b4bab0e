// How the planner spends a deletion budget: bin count, shortfall, cap, and
// the worst-case deletions, across budgets and both shipped coefficients.
//
//   cargo run -p thinpoint --example plan_budgets

use thinpoint::bounds::{plan_thinning, theorem_bound, Regime};
use thinpoint::harness::{AGGRESSIVE_C_LAMBDA, CONSERVATIVE_C_LAMBDA};

fn main() -> thinpoint::Result<()> {
    let n = 100_000u64;
    for (label, c_lambda) in [
        ("conservative (c_lambda = 10)", CONSERVATIVE_C_LAMBDA),
        ("aggressive   (c_lambda = 1)", AGGRESSIVE_C_LAMBDA),
    ] {
        println!("n = {n}, {label}");
        println!("{:>8} {:>6} {:>10} {:>8} {:>12} {:>12}", "m", "k", "lambda", "cap", "deletions", "bound");
        for m in [0u64, 1_000, 2_000, 3_500, 5_000, 7_500, 10_000] {
            let plan = plan_thinning(n, m, c_lambda)?;
            let bound = theorem_bound(n as f64, m.max(1) as f64);
            match plan.regime {
                Regime::NoDeletion => {
                    println!("{m:>8} {:>6} {:>10} {:>8} {:>12} {bound:>12.4}", "-", "-", "-", 0);
                }
                Regime::Thin { k, lambda, cap } => {
                    println!(
                        "{m:>8} {k:>6} {lambda:>10.1} {cap:>8} {:>12} {bound:>12.4}",
                        plan.max_deletions
                    );
                }
            }
        }
        println!();
    }

    // Budgets beyond a tenth of the sample are outside the construction.
    let err = plan_thinning(n, n / 10 + 1, CONSERVATIVE_C_LAMBDA).unwrap_err();
    println!("m = {} is rejected: {err}", n / 10 + 1);
    Ok(())
}
