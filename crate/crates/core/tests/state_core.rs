use num_complex::Complex64;
use proptest::prelude::*;
use spincat::hermite::{eigenfunction, eigenfunctions};
use spincat::protocol::squeezed_state_exact;
use spincat::quadrature::{fourier_pair, to_quadrature, Basis, QuadratureGrid, QuadratureWavefunction};
use spincat::state::NumberState;

fn riemann(grid: &QuadratureGrid, f: impl Fn(f64) -> f64) -> f64 {
    grid.points().into_iter().map(f).sum::<f64>() * grid.spacing()
}

#[test]
fn eigenfunction_examples() {
    let pi_quarter = std::f64::consts::PI.powf(-0.25);
    assert!((eigenfunction(0, 0.0).unwrap() - pi_quarter).abs() < 1e-15);
    assert_eq!(eigenfunction(1, 0.0).unwrap(), 0.0);
    // pi^{-1/4} (2^2 2!)^{-1/2} H_2(0), H_2(0) = -2
    let direct = pi_quarter / 8f64.sqrt() * -2.0;
    assert!((eigenfunction(2, 0.0).unwrap() - direct).abs() < 1e-15);
    assert!((direct + 0.531126).abs() < 1e-6);
    assert!(eigenfunction(2001, 0.0).is_err());
}

#[test]
fn orthonormal_up_to_sixty() {
    let half = (2.0 * 61.0f64).sqrt() + 8.0;
    let grid = QuadratureGrid::symmetric(half, 2048).unwrap();
    let table: Vec<Vec<f64>> = grid
        .points()
        .into_iter()
        .map(|u| eigenfunctions(60, u).unwrap())
        .collect();
    let h = grid.spacing();
    let mut worst = 0.0f64;
    for m in 0..=60 {
        for n in 0..=m {
            let s: f64 = table.iter().map(|row| row[m] * row[n]).sum::<f64>() * h;
            let expected = if m == n { 1.0 } else { 0.0 };
            worst = worst.max((s - expected).abs());
        }
    }
    assert!(worst < 1e-8, "worst deviation {worst:e}");
}

#[test]
fn squeezed_norm_on_p_grid() {
    let state = squeezed_state_exact(3.0, 80).unwrap();
    let grid = QuadratureGrid::for_squeezed(3.0).unwrap();
    let wf = to_quadrature(&state, &grid, Basis::P).unwrap();
    assert!((wf.norm() - 1.0).abs() < 1e-6);
    // defining Gaussian exp(-p^2/(2 xi2)), normalized by direct quadrature
    let c = riemann(&grid, |p| (-p * p / 3.0).exp()).sqrt();
    for (p, v) in grid.points().into_iter().zip(wf.values()) {
        assert!((v.re - (-p * p / 6.0).exp() / c).abs() < 1e-8);
        assert_eq!(v.im, 0.0);
    }
}

#[test]
fn coefficient_ratio_by_projection() {
    // Projecting the p-representation exp(-p^2/(2 xi2)) onto phi_n reproduces
    // the number-basis coefficients directly.
    let xi2 = 3.0;
    let grid = QuadratureGrid::symmetric(40.0, 8192).unwrap();
    let c0 = riemann(&grid, |p| (-p * p / (2.0 * xi2)).exp() * eigenfunction(0, p).unwrap());
    let c2 = riemann(&grid, |p| (-p * p / (2.0 * xi2)).exp() * eigenfunction(2, p).unwrap());
    let oracle = c2 / c0;
    assert!((oracle - 0.25 * 2f64.sqrt()).abs() < 1e-10, "{oracle}");
    let s = squeezed_state_exact(xi2, 40).unwrap();
    let a = s.amplitudes();
    assert!((a[2].re / a[0].re - oracle).abs() < 1e-10);
    // the x-representation exp(-xi2 x^2/2) carries the i^n phase: -c(2)/c(0)
    let x0 = riemann(&grid, |x| (-xi2 * x * x / 2.0).exp() * eigenfunction(0, x).unwrap());
    let x2 = riemann(&grid, |x| (-xi2 * x * x / 2.0).exp() * eigenfunction(2, x).unwrap());
    assert!((x2 / x0 + oracle).abs() < 1e-10);
}

fn phase_expansion(state: &NumberState, grid: &QuadratureGrid) -> Vec<Complex64> {
    let n_max = state.n_max();
    grid.points()
        .into_iter()
        .map(|x| {
            let phis = eigenfunctions(n_max, x).unwrap();
            let mut i_n = Complex64::new(1.0, 0.0);
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, phi) in state.amplitudes().iter().zip(phis) {
                acc += a * i_n * phi;
                i_n *= Complex64::i();
            }
            acc
        })
        .collect()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max)
}

#[test]
fn x_basis_matches_phase_expansion() {
    let cat = spincat::CatPreparation::new(20.0, 1.0 / 3.0, 7.0 / 3.0, 1e-10).unwrap().cat;
    let grid = QuadratureGrid::for_cat(cat.mean_number()).unwrap();
    let x = to_quadrature(&cat, &grid, Basis::X).unwrap();
    let p = to_quadrature(&cat, &grid, Basis::P).unwrap();
    let oracle = phase_expansion(&cat, &grid);
    assert!(max_diff(x.values(), &oracle) < 1e-6);
    assert!(max_diff(fourier_pair(&p).unwrap().values(), x.values()) < 1e-12);
}

#[test]
fn oscillator_identity_for_squeezed_and_cat() {
    let states = [
        squeezed_state_exact(5.0, 120).unwrap(),
        spincat::CatPreparation::new(20.0, 1.0 / 3.0, 7.0 / 3.0, 1e-10).unwrap().cat,
    ];
    for s in &states {
        let grid = QuadratureGrid::symmetric(24.0, 1024).unwrap();
        let p = to_quadrature(s, &grid, Basis::P).unwrap();
        let x = to_quadrature(s, &grid, Basis::X).unwrap();
        let lhs = 0.5 * (x.coordinate_moments().1 + p.coordinate_moments().1);
        assert!((lhs - (s.mean_number() + 0.5)).abs() < 1e-6, "{lhs} vs {}", s.mean_number() + 0.5);
    }
}

#[test]
fn csv_round_trip_is_exact() {
    let s = squeezed_state_exact(20.0, 64).unwrap();
    let mut buf = Vec::new();
    s.write_csv(&mut buf).unwrap();
    let back = NumberState::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, s);
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("n,re,im\n"));
}

#[test]
fn fourier_twice_reflects() {
    let grid = QuadratureGrid::symmetric(12.0, 512).unwrap();
    let wf = QuadratureWavefunction::from_fn(grid, Basis::P, |p| {
        Complex64::new((-(p - 1.5).powi(2)).exp(), 0.3 * (-(p + 0.5).powi(2)).exp())
    });
    let back = fourier_pair(&fourier_pair(&wf).unwrap()).unwrap();
    let reflected: Vec<Complex64> = wf.values().iter().rev().cloned().collect();
    assert_eq!(back.basis(), Basis::P);
    assert!(max_diff(back.values(), &reflected) < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_even_states_obey_parseval_and_identity(
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..=16),
    ) {
        prop_assume!(coeffs.iter().any(|c| c.abs() > 1e-3));
        let mut amps = vec![0.0; 2 * coeffs.len()];
        for (k, c) in coeffs.iter().enumerate() {
            amps[2 * k] = *c;
        }
        let state = NumberState::from_real(&amps).unwrap().normalize().unwrap();
        prop_assert!(state.has_even_parity());
        let grid = QuadratureGrid::symmetric(16.0, 512).unwrap();
        let p = to_quadrature(&state, &grid, Basis::P).unwrap();
        let x = to_quadrature(&state, &grid, Basis::X).unwrap();
        prop_assert!((p.norm() - 1.0).abs() < 1e-6);
        prop_assert!((x.norm() - 1.0).abs() < 1e-6);
        let lhs = 0.5 * (x.coordinate_moments().1 + p.coordinate_moments().1);
        prop_assert!((lhs - state.mean_number() - 0.5).abs() < 1e-6);
        prop_assert!(max_diff(x.values(), &phase_expansion(&state, &grid)) < 1e-6);
    }
}
