//! Squeezed state left by the first measurement: exact coefficients against
//! the geometric approximation, and quadrature variances from both the
//! number basis and the sampled wavefunctions.
//!
//! cargo run --example squeezed_state -- 20

use spincat::protocol::{squeezed_state_exact, squeezed_state_stirling};
use spincat::quadrature::{to_quadrature, Basis, QuadratureGrid};
use spincat::state::{choose_truncation, DEFAULT_TAIL_TOL};

fn main() -> spincat::Result<()> {
    let xi2: f64 = std::env::args().nth(1).map_or(20.0, |s| s.parse().expect("xi2 must be a number"));
    let n_max = choose_truncation(xi2, 1.0, 0.0, DEFAULT_TAIL_TOL)?;
    let exact = squeezed_state_exact(xi2, n_max)?;
    let grid = QuadratureGrid::for_squeezed(xi2)?;
    let m = exact.quadrature_moments();
    let var_x = to_quadrature(&exact, &grid, Basis::X)?.coordinate_moments().1;
    let var_p = to_quadrature(&exact, &grid, Basis::P)?.coordinate_moments().1;

    println!("xi2 = {xi2}, truncation n_max = {n_max}");
    println!("           {:>12} {:>12} {:>12}", "number", "grid", "expected");
    println!("var x      {:>12.6} {:>12.6} {:>12.6}", m.var_x, var_x, 1.0 / (2.0 * xi2));
    println!("var p      {:>12.6} {:>12.6} {:>12.6}", m.var_p, var_p, xi2 / 2.0);
    println!("<n>        {:>12.6} {:>12} {:>12.6}", m.mean_n, "", (xi2 + 1.0 / xi2) / 4.0 - 0.5);

    if xi2 > 1.0 {
        let approx = squeezed_state_stirling(xi2, n_max)?;
        println!("\n  n   exact c(n)     geometric c(n)");
        for n in (0..=20).step_by(2) {
            println!(
                "{n:>3}   {:<14.6e} {:<14.6e}",
                exact.amplitudes()[n].re,
                approx.amplitudes()[n].re
            );
        }
        println!("|<exact|geometric>| = {:.6}", exact.inner(&approx).norm());
    }
    Ok(())
}
