//! Monte Carlo over both measurement outcomes. Compares the sampled p_R
//! histogram with the analytic mixture density and counts how often the
//! outcome yields a resolvable cat.
//!
//! cargo run --release --example outcome_sampling -- [count] [seed]

use spincat::state::DEFAULT_TAIL_TOL;
use spincat::trajectory::{chi_square, histogram, TrajectoryRun};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn main() -> spincat::Result<()> {
    let mut args = std::env::args().skip(1);
    let count: u64 = args.next().map_or(20_000, |s| s.parse().expect("count"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));
    let (xi2, beta) = (20.0, 1.0 / 3.0);

    let run = TrajectoryRun::new(xi2, beta, count, seed, DEFAULT_TAIL_TOL)?;
    let density = run.density();
    let sd = density.variance().sqrt();
    let (lo, hi) = (density.mean() - 4.0 * sd, density.mean() + 4.0 * sd);
    let bins = histogram(&run.outcomes(), lo, hi, 24, &density);

    println!("{count} trajectories, xi2 = {xi2}, beta = {beta:.4}, seed = {seed}");
    println!("{:>8} {:>10} {:>10}", "p_R", "sampled", "analytic");
    let scale = 60.0 / bins.iter().map(|b| b.expected_probability).fold(0.0, f64::max);
    for b in &bins {
        let width = b.hi - b.lo;
        let empirical = b.count as f64 / (count as f64 * width);
        let bar = "#".repeat((b.count as f64 / count as f64 * scale).round() as usize);
        println!("{:>8.3} {:>10.4} {:>10.4} {bar}", 0.5 * (b.lo + b.hi), empirical, b.expected_probability / width);
    }
    let (stat, dof) = chi_square(&bins, count);
    let p_value = 1.0 - ChiSquared::new(dof as f64).expect("dof > 0").cdf(stat);
    println!("chi2 = {stat:.2} on {dof} dof, p = {p_value:.3}");

    let resolvable = run.records.iter().filter(|r| r.resolvable).count() as f64 / count as f64;
    let expected = 1.0 - density.cdf(run.resolvable_threshold());
    println!("resolvable fraction {resolvable:.4} (analytic {expected:.4})");
    Ok(())
}
