// Before/after bridge profiles of one thinning run, written as CSV for
// plotting. The profile graphs sqrt(n) * (x_(i) - i/n) against i/n; thinning
// at the aggressive coefficient flattens it visibly.
//
//   cargo run --release -p thinpoint --example bridge_profiles

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use thinpoint::bounds::plan_thinning;
use thinpoint::discrepancy::bridge_profile;
use thinpoint::distributions::DistributionSpec;
use thinpoint::harness::{emit_profiles, AGGRESSIVE_C_LAMBDA};
use thinpoint::thinning::thin_offline;

fn main() -> thinpoint::Result<()> {
    let n = 100_000u64;
    let m = 5_000u64;
    let mut rng = ChaCha12Rng::seed_from_u64(6);
    let before = DistributionSpec::Uniform01.sample_points(n as usize, &mut rng)?;

    let plan = plan_thinning(n, m, AGGRESSIVE_C_LAMBDA)?;
    let (after, report) = thin_offline(&before, &plan, &mut rng)?;

    let base = std::env::temp_dir().join("thinpoint-bridge");
    let (before_path, after_path) = emit_profiles(&before, &after, &base)?;
    println!("wrote {}", before_path.display());
    println!("wrote {}", after_path.display());

    println!(
        "\nkept {} of {n} points with k = {} bins",
        report.n_kept,
        plan.k().expect("this budget thins")
    );
    println!(
        "peak |deviation| before: {:.4}",
        bridge_profile(&before).max_abs_deviation()
    );
    println!(
        "peak |deviation| after:  {:.4}",
        bridge_profile(&after).max_abs_deviation()
    );
    println!("\nplot either file as position vs deviation to see the flattening,");
    println!("e.g. gnuplot: plot '{}' every ::1 using 2:3 with lines", after_path.display());
    Ok(())
}
