//! Sweep of the step-two outcome across the resolvability threshold
//! mu = 1/beta: lobe separation against lobe width, and fringe visibility,
//! for the exact conditional states.
//!
//! cargo run --release --example threshold_scan

use spincat::cat::{check_cat_conditions, detect_peaks, fringe_metrics};
use spincat::protocol::mu_of_outcome;
use spincat::quadrature::{to_quadrature, Basis, QuadratureGrid};
use spincat::state::DEFAULT_TAIL_TOL;
use spincat::CatPreparation;

fn main() -> spincat::Result<()> {
    let (xi2, beta) = (20.0, 1.0 / 3.0);
    println!("xi2 = {xi2}, beta = {beta:.4}, threshold mu = {}", 1.0 / beta);
    println!("{:>6} {:>8} {:>6} {:>12} {:>10} {:>10}", "p_R", "mu", "lobes", "sep/(2 std)", "period", "resolvable");
    for k in 0..=12 {
        let p_r = 0.5 + 0.25 * k as f64;
        let mu = mu_of_outcome(p_r, beta, xi2)?.exact;
        let prep = CatPreparation::new(xi2, beta, p_r, DEFAULT_TAIL_TOL)?;
        let grid = QuadratureGrid::for_cat(mu.max(0.5))?.resolving(&prep.cat)?;
        let peaks = detect_peaks(&to_quadrature(&prep.cat, &grid, Basis::P)?)?;
        let ratio = match peaks.positions.as_slice() {
            [a, b] => format!("{:.3}", (b - a).abs() / (peaks.stds[0] + peaks.stds[1])),
            _ => "-".to_string(),
        };
        let period = match fringe_metrics(&to_quadrature(&prep.cat, &grid, Basis::X)?) {
            Ok(f) => format!("{:.3}", f.period),
            Err(_) => "-".to_string(),
        };
        let c = check_cat_conditions(mu, beta, xi2)?;
        println!(
            "{p_r:>6.2} {mu:>8.3} {:>6} {ratio:>12} {period:>10} {:>10}",
            peaks.positions.len(),
            c.resolvable
        );
    }
    Ok(())
}
