//! Command-line frontend: every pipeline stage as a scriptable subcommand.
//!
//! Exit codes: 0 on success, 2 for usage and validation problems (including
//! unreadable or malformed input files), 3 for output I/O failures. Output
//! files are written through a temporary sibling and renamed into place, so
//! a failed run never leaves a partial file. Every command that consumes
//! randomness takes an explicit `--seed`; there is no fallback entropy
//! source, which keeps reruns byte-identical.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::bounds::{
    chernoff_lower_tail, dkw_tail, kolmogorov_sf, plan_thinning, proof_bound, theorem_bound,
    ThinningPlan, DEFAULT_C_LAMBDA,
};
use crate::discrepancy::{ks_vs_cdf, star_discrepancy};
use crate::distributions::{ContinuousDistribution, DistributionSpec};
use crate::error::{Error, Result};
use crate::harness::{
    emit_profiles, run_sweep, Mode, TrialConfig, AGGRESSIVE_C_LAMBDA, CONSERVATIVE_C_LAMBDA,
};
use crate::pointset::{read_point_file, write_atomic, write_point_file, PointSet};
use crate::thinning::{thin_offline_indices, OnlineThinner, ThinningReport};

#[derive(Parser)]
#[command(
    name = "thinpoint",
    version,
    about = "Regularize a random sample on [0,1] by deleting a few points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Star discrepancy of a point set, or its KS distance from a distribution
    Disc(DiscArgs),
    /// Thin a sample under a deletion budget and report what happened
    Thin(ThinArgs),
    /// Evaluate one tail bound, or print the plan a budget buys
    Bound(BoundArgs),
    /// Monte Carlo sweep of thinning trials across deletion budgets
    Sweep(SweepArgs),
    /// Before/after bridge-profile CSVs for one seeded thinning run
    Profile(ProfileArgs),
}

/// Named `c_lambda` settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    /// c_lambda = 10: deficient bins are a probability-n^-4 event
    Conservative,
    /// c_lambda = 1: ten times more bins, visibly smoother output
    Aggressive,
}

impl Preset {
    fn c_lambda(self) -> f64 {
        match self {
            Preset::Conservative => CONSERVATIVE_C_LAMBDA,
            Preset::Aggressive => AGGRESSIVE_C_LAMBDA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct DiscArgs {
    /// Point file, one decimal real per line (# starts a comment)
    #[arg(long = "in", value_name = "FILE", conflicts_with_all = ["n", "seed"])]
    input: Option<PathBuf>,
    /// Generate this many points instead of reading a file
    #[arg(long, requires = "seed")]
    n: Option<u64>,
    /// Seed for generation
    #[arg(long)]
    seed: Option<u64>,
    /// uniform | normal:MU,SIGMA | exp:RATE; with --in, the file holds raw
    /// samples and the KS distance is measured against this CDF
    #[arg(long)]
    dist: Option<DistributionSpec>,
}

#[derive(Args)]
struct ThinArgs {
    /// Point file to thin; unit-interval points unless --dist declares the
    /// file to hold raw samples
    #[arg(long = "in", value_name = "FILE", conflicts_with = "n")]
    input: Option<PathBuf>,
    /// Generate this many points instead of reading a file
    #[arg(long)]
    n: Option<u64>,
    /// Deletion budget
    #[arg(long)]
    m: u64,
    /// Seed for generation and for the deletion choices
    #[arg(long)]
    seed: u64,
    /// Input distribution; defaults to uniform when generating
    #[arg(long)]
    dist: Option<DistributionSpec>,
    /// Shortfall coefficient; defaults to the conservative 10
    #[arg(long = "c-lambda", conflicts_with = "preset")]
    c_lambda: Option<f64>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Decide point by point in arrival order instead of all at once
    #[arg(long)]
    online: bool,
    /// Write the kept points here (ascending, point-file format)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Write the JSON report here instead of standard output
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    /// Which quantity to evaluate
    #[arg(long, value_enum)]
    kind: BoundKind,
    /// Mean, for chernoff
    #[arg(long)]
    mu: Option<f64>,
    /// Relative shortfall in [0,1), for chernoff
    #[arg(long)]
    delta: Option<f64>,
    /// Sample size, for dkw, theorem, and plan
    #[arg(long)]
    n: Option<u64>,
    /// Band width, for dkw
    #[arg(long)]
    eps: Option<f64>,
    /// Evaluation point, for kolmogorov
    #[arg(long)]
    z: Option<f64>,
    /// Deletion budget, for theorem and plan
    #[arg(long)]
    m: Option<u64>,
    /// Kept-set size, for proof
    #[arg(long)]
    kept: Option<u64>,
    /// Bin count, for proof
    #[arg(long)]
    k: Option<u64>,
    /// Shortfall coefficient, for plan
    #[arg(long = "c-lambda", conflicts_with = "preset")]
    c_lambda: Option<f64>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundKind {
    /// Chernoff lower tail exp(-delta^2 mu / 2)
    Chernoff,
    /// DKW band tail 2 exp(-2 n eps^2)
    Dkw,
    /// Kolmogorov distribution survival function at z
    Kolmogorov,
    /// Headline guarantee 100 ln(n) / m
    Theorem,
    /// Certified bound 10 sqrt(ln(kept*k) / (kept*k))
    Proof,
    /// The thinning plan for (n, m) as JSON
    Plan,
}

#[derive(Args)]
struct SweepArgs {
    /// Sample size per trial
    #[arg(long)]
    n: u64,
    /// Comma-separated deletion budgets
    #[arg(long = "m-list", value_name = "M,M,...", value_delimiter = ',', required = true)]
    m_list: Vec<u64>,
    /// Trials per budget
    #[arg(long)]
    trials: u64,
    /// Master seed; each trial derives its own stream seed
    #[arg(long)]
    seed: u64,
    /// Input distribution
    #[arg(long, default_value = "uniform")]
    dist: DistributionSpec,
    /// Shortfall coefficient; defaults to the conservative 10
    #[arg(long = "c-lambda", conflicts_with = "preset")]
    c_lambda: Option<f64>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Thin through the online path instead of offline
    #[arg(long)]
    online: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Write here instead of standard output
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    /// Sample size
    #[arg(long)]
    n: u64,
    /// Deletion budget
    #[arg(long)]
    m: u64,
    /// Seed for generation and deletion choices
    #[arg(long)]
    seed: u64,
    /// Input distribution
    #[arg(long, default_value = "uniform")]
    dist: DistributionSpec,
    /// Shortfall coefficient; defaults to the conservative 10
    #[arg(long = "c-lambda", conflicts_with = "preset")]
    c_lambda: Option<f64>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Base path; writes BASE.before.csv and BASE.after.csv
    #[arg(long, value_name = "BASE")]
    out: PathBuf,
}

/// Entry point for the `thinpoint` binary. Parse errors exit 2 through
/// clap; everything else maps through [`exit_code_for`].
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// Validation and read-side failures are usage errors (2); only failures
/// while producing output are I/O errors (3).
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io { action: "read", .. } => 2,
        Error::Io { .. } => 3,
        _ => 2,
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Disc(args) => cmd_disc(args),
        Command::Thin(args) => cmd_thin(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Profile(args) => cmd_profile(args),
    }
}

fn resolved_c_lambda(c_lambda: Option<f64>, preset: Option<Preset>) -> f64 {
    preset
        .map(Preset::c_lambda)
        .or(c_lambda)
        .unwrap_or(DEFAULT_C_LAMBDA)
}

fn cmd_disc(args: DiscArgs) -> Result<()> {
    let value = match (&args.input, args.n) {
        (Some(path), None) => {
            let values = read_point_file(path)?;
            match args.dist {
                Some(dist) => ks_vs_cdf(&values, |x| dist.cdf(x))?,
                None => star_discrepancy(&PointSet::from_unsorted(values)?)?,
            }
        }
        (None, Some(n)) => {
            let seed = args.seed.expect("clap enforces --seed with --n");
            let dist = args.dist.unwrap_or(DistributionSpec::Uniform01);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let raw = dist.sample(n as usize, &mut rng);
            ks_vs_cdf(&raw, |x| dist.cdf(x))?
        }
        _ => {
            return Err(Error::domain(
                "give exactly one input source: --in FILE, or --n with --seed".to_string(),
            ))
        }
    };
    println!("{value}");
    Ok(())
}

/// Raw samples paired with their CDF images, ordered by image. The pairing
/// survives thinning, so kept points can be written back on the original
/// scale.
fn paired_by_image(raw: &[f64], dist: DistributionSpec) -> Result<(Vec<f64>, PointSet)> {
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
    for (i, &x) in raw.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::domain(format!(
                "sample value at index {i} is {x}, expected a finite real"
            )));
        }
        pairs.push((dist.cdf(x), x));
    }
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let raw_sorted: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let images = PointSet::from_sorted(pairs.into_iter().map(|p| p.0).collect())?;
    Ok((raw_sorted, images))
}

fn cmd_thin(args: ThinArgs) -> Result<()> {
    let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
    // Arrival order: file order, or generation order.
    let (raw, dist) = match (&args.input, args.n) {
        (Some(path), None) => (read_point_file(path)?, args.dist),
        (None, Some(n)) => {
            let dist = args.dist.unwrap_or(DistributionSpec::Uniform01);
            (dist.sample(n as usize, &mut rng), Some(dist))
        }
        _ => {
            return Err(Error::domain(
                "give exactly one input source: --in FILE, or --n".to_string(),
            ))
        }
    };

    let n = raw.len() as u64;
    let plan = plan_thinning(n, args.m, resolved_c_lambda(args.c_lambda, args.preset))?;
    let (mut kept_raw, report) = if args.online {
        thin_stream(&raw, dist, &plan)?
    } else {
        let (raw_sorted, images) = match dist {
            Some(d) => paired_by_image(&raw, d)?,
            None => {
                let images = PointSet::from_unsorted(raw)?;
                (images.values().to_vec(), images)
            }
        };
        let (indices, report) = thin_offline_indices(&images, &plan, &mut rng)?;
        (indices.into_iter().map(|i| raw_sorted[i]).collect(), report)
    };

    if let Some(out) = &args.out {
        kept_raw.sort_unstable_by(f64::total_cmp);
        write_point_file(out, &kept_raw)?;
    }
    let json = report.to_json();
    match &args.report {
        Some(path) => write_atomic(path, json.as_bytes())?,
        None => print!("{json}"),
    }
    Ok(())
}

fn thin_stream(
    raw: &[f64],
    dist: Option<DistributionSpec>,
    plan: &ThinningPlan,
) -> Result<(Vec<f64>, ThinningReport)> {
    let mut thinner = OnlineThinner::new(plan);
    let mut kept_raw = Vec::new();
    let mut kept_images = Vec::new();
    for &x in raw {
        let u = match dist {
            Some(d) => d.cdf(x),
            None => x,
        };
        if thinner.offer(u)?.is_accept() {
            kept_raw.push(x);
            kept_images.push(u);
        }
    }
    let report = thinner.finish(&PointSet::from_unsorted(kept_images)?)?;
    Ok((kept_raw, report))
}

fn require<T: Copy>(flag: Option<T>, name: &str, kind: &str) -> Result<T> {
    flag.ok_or_else(|| Error::domain(format!("--kind {kind} needs --{name}")))
}

fn cmd_bound(args: BoundArgs) -> Result<()> {
    match args.kind {
        BoundKind::Chernoff => {
            let mu = require(args.mu, "mu", "chernoff")?;
            let delta = require(args.delta, "delta", "chernoff")?;
            println!("{}", chernoff_lower_tail(mu, delta)?);
        }
        BoundKind::Dkw => {
            let n = require(args.n, "n", "dkw")?;
            let eps = require(args.eps, "eps", "dkw")?;
            if n < 1 {
                return Err(Error::domain("--kind dkw needs n >= 1".to_string()));
            }
            if !eps.is_finite() || eps < 0.0 {
                return Err(Error::domain(format!("--kind dkw needs eps >= 0, got {eps}")));
            }
            println!("{}", dkw_tail(n, eps));
        }
        BoundKind::Kolmogorov => {
            let z = require(args.z, "z", "kolmogorov")?;
            if !z.is_finite() || z < 0.0 {
                return Err(Error::domain(format!(
                    "--kind kolmogorov needs z >= 0, got {z}"
                )));
            }
            println!("{}", kolmogorov_sf(z));
        }
        BoundKind::Theorem => {
            let n = require(args.n, "n", "theorem")?;
            let m = require(args.m, "m", "theorem")?;
            if n < 2 || m < 1 {
                return Err(Error::domain(
                    "--kind theorem needs n >= 2 and m >= 1".to_string(),
                ));
            }
            println!("{}", theorem_bound(n as f64, m as f64));
        }
        BoundKind::Proof => {
            let kept = require(args.kept, "kept", "proof")?;
            let k = require(args.k, "k", "proof")?;
            if kept < 1 || k < 1 || kept * k < 2 {
                return Err(Error::domain(
                    "--kind proof needs kept >= 1, k >= 1, kept*k >= 2".to_string(),
                ));
            }
            println!("{}", proof_bound(kept as f64, k as f64));
        }
        BoundKind::Plan => {
            let n = require(args.n, "n", "plan")?;
            let m = require(args.m, "m", "plan")?;
            let plan = plan_thinning(n, m, resolved_c_lambda(args.c_lambda, args.preset))?;
            let mut json =
                serde_json::to_string_pretty(&plan).expect("plan serializes");
            json.push('\n');
            print!("{json}");
        }
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let base = TrialConfig {
        n: args.n,
        m: 0,
        c_lambda: resolved_c_lambda(args.c_lambda, args.preset),
        distribution: args.dist,
        master_seed: args.seed,
        mode: if args.online { Mode::Online } else { Mode::Offline },
    };
    let result = run_sweep(&base, args.trials, &args.m_list)?;
    let text = match args.format {
        OutputFormat::Json => result.to_json(),
        OutputFormat::Csv => result.to_csv(),
    };
    match &args.out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_profile(args: ProfileArgs) -> Result<()> {
    let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
    let before = args.dist.sample_points(args.n as usize, &mut rng)?;
    let plan = plan_thinning(
        args.n,
        args.m,
        resolved_c_lambda(args.c_lambda, args.preset),
    )?;
    let (indices, _) = thin_offline_indices(&before, &plan, &mut rng)?;
    let after = PointSet::from_sorted(indices.iter().map(|&i| before.values()[i]).collect())?;
    let (before_path, after_path) = emit_profiles(&before, &after, &args.out)?;
    println!("{}", before_path.display());
    println!("{}", after_path.display());
    Ok(())
}
