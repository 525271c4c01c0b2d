//! Oscillator eigenfunctions and the quadrature transform: phi_n on a grid,
//! their orthonormality, and the identity F[phi_n] = i^n phi_n.
//!
//! cargo run --example hermite_fourier

use num_complex::Complex64;
use spincat::hermite::eigenfunction;
use spincat::quadrature::{fourier_pair, Basis, QuadratureGrid, QuadratureWavefunction};

fn main() -> spincat::Result<()> {
    let grid = QuadratureGrid::symmetric(12.0, 1024)?;
    let phi = |n: usize| {
        QuadratureWavefunction::from_fn(grid, Basis::P, |p| {
            Complex64::new(eigenfunction(n, p).expect("order within budget"), 0.0)
        })
    };

    println!("phi_n(0): {:?}", (0..5).map(|n| eigenfunction(n, 0.0)).collect::<Result<Vec<_>, _>>()?);
    println!("\n  n   <phi_n|phi_n>   <phi_n|phi_n+1>   max |F[phi_n] - i^n phi_n|");
    let mut i_n = Complex64::new(1.0, 0.0);
    for n in 0..8 {
        let a = phi(n);
        let b = phi(n + 1);
        let transformed = fourier_pair(&a)?;
        let err = transformed
            .values()
            .iter()
            .zip(a.values())
            .map(|(t, v)| (t - i_n * v).norm())
            .fold(0.0, f64::max);
        println!("{n:>3}   {:<15.12} {:<17.2e} {:.2e}", a.inner(&a)?.re, a.inner(&b)?.norm(), err);
        i_n *= Complex64::i();
    }
    println!("\nphi_2000(1.0) = {:.6e}", eigenfunction(2000, 1.0)?);
    Ok(())
}
