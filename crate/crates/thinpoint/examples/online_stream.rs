// Streaming thinning: accept or reject each point on arrival, no lookahead.
// A bin's quota is its plan cap; once full, later arrivals bounce.
//
//   cargo run -p thinpoint --example online_stream

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use thinpoint::bounds::{plan_thinning, ThinningPlan};
use thinpoint::harness::AGGRESSIVE_C_LAMBDA;
use thinpoint::thinning::{decision_string, thin_offline, OnlineThinner};
use thinpoint::PointSet;

fn main() -> thinpoint::Result<()> {
    // Five arrivals, two bins, two slots per bin. The fourth point lands in
    // the already-full first bin and is the only rejection.
    let plan = ThinningPlan::manual(5, 1, 2, 2)?;
    let mut thinner = OnlineThinner::new(&plan);
    let mut decisions = Vec::new();
    let mut accepted = Vec::new();
    for x in [0.1, 0.6, 0.2, 0.3, 0.7] {
        let d = thinner.offer(x)?;
        if d.is_accept() {
            accepted.push(x);
        }
        decisions.push(d);
        println!(
            "offer {x:.1} -> {} (bin {})",
            if d.is_accept() { "accept" } else { "reject" },
            d.bin().ell()
        );
    }
    println!("decision string: {}", decision_string(&decisions));
    let report = thinner.finish(&PointSet::from_unsorted(accepted)?)?;
    println!("kept per bin: {:?}\n", report.per_bin_kept);

    // At scale, the stream keeps exactly as many points per bin as the
    // offline path does, because both stop each bin at the same cap.
    let n = 50_000u64;
    let plan = plan_thinning(n, 4_000, AGGRESSIVE_C_LAMBDA)?;
    let mut rng = ChaCha12Rng::seed_from_u64(77);
    let arrivals: Vec<f64> = (0..n).map(|_| rng.gen()).collect();

    let mut thinner = OnlineThinner::new(&plan);
    let mut accepted = Vec::new();
    for &x in &arrivals {
        if thinner.offer(x)?.is_accept() {
            accepted.push(x);
        }
    }
    let online = thinner.finish(&PointSet::from_unsorted(accepted)?)?;

    let ps = PointSet::from_unsorted(arrivals)?;
    let (_, offline) = thin_offline(&ps, &plan, &mut rng)?;

    println!("n = {n}, k = {}, cap = {}", plan.k().unwrap(), plan.cap().unwrap());
    println!("online kept:  {} points, discrepancy {:.6}", online.n_kept, online.discrepancy_after);
    println!("offline kept: {} points, discrepancy {:.6}", offline.n_kept, offline.discrepancy_after);
    assert_eq!(online.per_bin_kept, offline.per_bin_kept);
    println!("per-bin kept counts agree bin for bin");
    Ok(())
}
