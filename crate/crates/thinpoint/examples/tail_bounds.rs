// The probability bounds underneath the construction, evaluated at the
// working point n = 100000, m = 5000: how unlikely a deficient bin is, how
// unlikely an uneven bin interior is, and what the two bounds certify.
//
//   cargo run -p thinpoint --example tail_bounds

use thinpoint::bounds::{
    binning_failure_prob, chernoff_lower_tail, dkw_tail, kolmogorov_sf, plan_thinning,
    proof_bound, theorem_bound, DEFAULT_C_LAMBDA,
};

fn main() -> thinpoint::Result<()> {
    let n = 100_000u64;
    let m = 5_000u64;
    let plan = plan_thinning(n, m, DEFAULT_C_LAMBDA)?;
    let (k, lambda, cap) = (
        plan.k().expect("this budget thins"),
        plan.lambda().expect("this budget thins"),
        plan.cap().expect("this budget thins"),
    );
    println!("plan at n = {n}, m = {m}: k = {k}, lambda = {lambda:.1}, cap = {cap}");

    // A single bin expects n/k points; falling lambda short is a Chernoff
    // event, and the union over bins stays polynomially small.
    let mu = n as f64 / k as f64;
    let delta = lambda * k as f64 / n as f64;
    println!(
        "one bin short by lambda:  chernoff({mu:.0}, {delta:.5}) = {:.3e}  (n^-5 = {:.3e})",
        chernoff_lower_tail(mu, delta)?,
        (n as f64).powi(-5)
    );
    println!(
        "any bin short:            {:.3e}  (n^-4 = {:.3e})",
        binning_failure_prob(n, k, lambda),
        (n as f64).powi(-4)
    );

    // Inside the kept set, the DKW band at the certified width is equally
    // negligible.
    let kept = (k * cap) as f64;
    let eps = 10.0 * (kept * k as f64).ln().sqrt() / (kept * k as f64).sqrt();
    println!(
        "kept set outside its band: dkw({} points, eps = {eps:.5}) = {:.3e}",
        kept as u64,
        dkw_tail(kept as u64, eps)
    );

    println!("\nwhat that certifies for the kept set:");
    println!("  certified bound  proof_bound({}, {k}) = {:.6}", kept as u64, proof_bound(kept, k as f64));
    println!("  headline bound   theorem_bound({n}, {m}) = {:.6}", theorem_bound(n as f64, m as f64));

    // The Kolmogorov law calibrates the unthinned side: sqrt(n) times the
    // discrepancy of an i.i.d. sample has this distribution in the limit.
    println!("\nKolmogorov survival function:");
    for z in [0.5, 0.8275735551899077, 1.0, 1.5, 2.0] {
        println!("  P(K > {z:.4}) = {:.6}", kolmogorov_sf(z));
    }
    println!("(z = 0.8276 is the median: half of all samples beat it)");
    Ok(())
}
