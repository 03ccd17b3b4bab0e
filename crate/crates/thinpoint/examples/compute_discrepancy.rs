// Star discrepancy basics: the closed form over order statistics, the
// brute-force cross-check, and how the statistic scales with sample size.
//
//   cargo run -p thinpoint --example compute_discrepancy

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use thinpoint::discrepancy::{bridge_profile, star_discrepancy, star_discrepancy_bruteforce};
use thinpoint::distributions::DistributionSpec;
use thinpoint::PointSet;

fn main() -> thinpoint::Result<()> {
    // The midpoint grid {1/2n, 3/2n, ...} achieves the minimum 1/(2n).
    let grid = PointSet::from_unsorted((0..8).map(|i| (2.0 * i as f64 + 1.0) / 16.0).collect())?;
    println!(
        "midpoint grid, n = 8:   discrepancy = {:.6} (minimum possible = {:.6})",
        star_discrepancy(&grid)?,
        1.0 / 16.0
    );

    // A lopsided set: both evaluation orders agree.
    let lumpy = PointSet::from_unsorted(vec![0.02, 0.03, 0.05, 0.9])?;
    println!(
        "lumpy set, n = 4:       closed form = {:.6}, brute force = {:.6}",
        star_discrepancy(&lumpy)?,
        star_discrepancy_bruteforce(&lumpy)?
    );

    // Random samples drift like sqrt(ln n / n).
    println!("\nseeded uniform samples vs the sqrt(ln n / n) scale:");
    let mut rng = ChaCha12Rng::seed_from_u64(2024);
    for n in [1_000usize, 10_000, 100_000] {
        let ps = DistributionSpec::Uniform01.sample_points(n, &mut rng)?;
        let d = star_discrepancy(&ps)?;
        let scale = ((n as f64).ln() / n as f64).sqrt();
        println!("  n = {n:>6}: discrepancy = {d:.6}, sqrt(ln n / n) = {scale:.6}");
    }

    // The bridge profile locates where the empirical CDF strays furthest.
    let ps = DistributionSpec::Uniform01.sample_points(10_000, &mut rng)?;
    let profile = bridge_profile(&ps);
    let (pos, dev) = profile
        .entries()
        .iter()
        .copied()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("profile of a non-empty set has entries");
    println!(
        "\nbridge profile, n = 10000: peak scaled deviation {dev:+.4} near position {pos:.4}"
    );
    println!(
        "discrepancy from the same sample: {:.6}",
        star_discrepancy(&ps)?
    );
    Ok(())
}
