// The full offline pipeline on one seeded sample: draw, plan, thin, and
// read the audit report.
//
//   cargo run -p thinpoint --example thin_offline

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use thinpoint::bounds::{plan_thinning, proof_bound};
use thinpoint::distributions::DistributionSpec;
use thinpoint::harness::AGGRESSIVE_C_LAMBDA;
use thinpoint::thinning::thin_offline;

fn main() -> thinpoint::Result<()> {
    let n = 100_000u64;
    let m = 5_000u64;
    let mut rng = ChaCha12Rng::seed_from_u64(1);
    let sample = DistributionSpec::Uniform01.sample_points(n as usize, &mut rng)?;

    let plan = plan_thinning(n, m, AGGRESSIVE_C_LAMBDA)?;
    println!(
        "plan: k = {}, cap = {}, worst-case deletions = {}",
        plan.k().expect("this budget thins"),
        plan.cap().expect("this budget thins"),
        plan.max_deletions
    );

    let (kept, report) = thin_offline(&sample, &plan, &mut rng)?;
    println!("kept {} of {} points ({} deleted)", kept.n(), n, report.deletions());
    println!("deficient bins: {:?}", report.deficient_bins);
    println!("discrepancy before: {:.6}", report.discrepancy_before);
    println!("discrepancy after:  {:.6}", report.discrepancy_after);
    println!(
        "certified bound:    {:.6}",
        proof_bound(report.n_kept as f64, plan.k().unwrap() as f64)
    );

    // The report's per-bin counts show each bin trimmed to the cap.
    let trimmed = report
        .per_bin_kept
        .iter()
        .filter(|&&c| Some(c) == plan.cap())
        .count();
    println!(
        "{} of {} bins hold exactly cap = {} points",
        trimmed,
        report.per_bin_kept.len(),
        plan.cap().unwrap()
    );

    println!("\nreport as JSON:\n{}", report.to_json());
    Ok(())
}
