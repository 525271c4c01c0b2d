use num_complex::Complex64;
use spincat::cat::{
    approx_p_wavefunction, approx_x_wavefunction, check_cat_conditions, detect_peaks,
    fringe_metrics, overlap, CatApproxParams, CatMetrics,
};
use spincat::hermite::eigenfunction;
use spincat::protocol::mu_of_outcome;
use spincat::quadrature::{fourier_pair, to_quadrature, Basis, QuadratureGrid, QuadratureWavefunction};
use spincat::state::DEFAULT_TAIL_TOL;
use spincat::{CatPreparation, Error};
use std::f64::consts::PI;

const BETA: f64 = 1.0 / 3.0;

fn approx_pair(mu: f64) -> (QuadratureWavefunction, QuadratureWavefunction) {
    let params = CatApproxParams::new(mu, BETA).unwrap();
    let grid = QuadratureGrid::for_cat(mu).unwrap();
    (
        approx_p_wavefunction(&params, &grid).unwrap(),
        approx_x_wavefunction(&params, &grid).unwrap(),
    )
}

/// Outcome whose exact conditional mean equals `mu`.
fn outcome_for(mu: f64, xi2: f64) -> f64 {
    BETA * mu - ((xi2 - 1.0) / (xi2 + 1.0)).ln() / (2.0 * BETA)
}

#[test]
fn approximation_examples() {
    let (p, x) = approx_pair(7.0);
    let peaks = detect_peaks(&p).unwrap();
    assert_eq!(peaks.positions.len(), 2);
    for pos in &peaks.positions {
        assert!((pos.abs() - 14f64.sqrt()).abs() < 0.01, "{pos}");
    }
    // amplitude std of each lobe is 1/(beta sqrt(2 mu))
    for s in &peaks.stds {
        assert!((s - 3.0 / 14f64.sqrt()).abs() / s < 0.02, "{s}");
    }
    let f = fringe_metrics(&x).unwrap();
    assert!((f.period / (2.0 * PI / 14f64.sqrt()) - 1.0).abs() < 0.02);
    assert!(f.visibility > 0.99);
    let values = p.values();
    let n = values.len();
    for k in 0..n / 2 {
        assert_eq!(values[k], values[n - 1 - k]);
    }
}

#[test]
fn analytic_envelope_and_period() {
    let m = CatMetrics::analytic(&CatApproxParams::new(7.0, BETA).unwrap(), 20.0).unwrap();
    assert!((m.fringe_period - 1.6793).abs() < 1e-4);
    assert!((m.envelope_std - 1.2472).abs() < 1e-4);
    assert!((m.peak_std - 0.8018).abs() < 1e-4);
    let (_, x) = approx_pair(7.0);
    // |psi|^2 variance of an envelope with amplitude std s is s^2/2 (cos^2
    // only shifts it at O(exp(-2 mu s^2)))
    let var = x.coordinate_moments().1;
    assert!(((2.0 * var).sqrt() - m.envelope_std).abs() / m.envelope_std < 0.01);
}

#[test]
fn x_form_is_fourier_transform_of_p_form() {
    for mu in [3.0, 7.0, 10.0] {
        let (p, x) = approx_pair(mu);
        let ft = fourier_pair(&p).unwrap().normalize().unwrap();
        let worst = ft
            .values()
            .iter()
            .zip(x.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-4, "mu {mu}: {worst:e}");
    }
}

#[test]
fn peak_fringe_duality_on_analytic_forms() {
    for mu in [3.0, 5.0, 7.0, 10.0] {
        let (p, x) = approx_pair(mu);
        let peaks = detect_peaks(&p).unwrap();
        assert_eq!(peaks.positions.len(), 2, "mu {mu}");
        let separation = (peaks.positions[1] - peaks.positions[0]).abs();
        let period = fringe_metrics(&x).unwrap().period;
        assert!((period * separation / (4.0 * PI) - 1.0).abs() < 0.02, "mu {mu}");
    }
}

#[test]
fn peak_fringe_duality_on_exact_states() {
    // The exact state departs from the two-lobe form near threshold; the
    // product approaches 4 pi as mu grows past 1/beta.
    let xi2 = 20.0;
    for (mu, tol) in [(3.0, 0.06), (5.0, 0.03), (7.0, 0.02), (10.0, 0.02)] {
        let prep = CatPreparation::new(xi2, BETA, outcome_for(mu, xi2), DEFAULT_TAIL_TOL).unwrap();
        let grid = QuadratureGrid::for_cat(mu).unwrap();
        let p = to_quadrature(&prep.cat, &grid, Basis::P).unwrap();
        let x = to_quadrature(&prep.cat, &grid, Basis::X).unwrap();
        let peaks = detect_peaks(&p).unwrap();
        assert_eq!(peaks.positions.len(), 2, "mu {mu}");
        let separation = (peaks.positions[1] - peaks.positions[0]).abs();
        let period = fringe_metrics(&x).unwrap().period;
        let ratio = period * separation / (4.0 * PI);
        assert!((ratio - 1.0).abs() < tol, "mu {mu}: ratio {ratio}");
    }
}

#[test]
fn threshold_coincidence_at_one_over_beta() {
    let mu = 1.0 / BETA;
    let analytic = CatMetrics::analytic(&CatApproxParams::new(mu, BETA).unwrap(), 20.0).unwrap();
    let ratio = analytic.peak_separation / (2.0 * analytic.peak_std);
    assert!((ratio - 2.0 * BETA * mu).abs() < 1e-12);
    let (p, _) = approx_pair(mu);
    let peaks = detect_peaks(&p).unwrap();
    let separation = (peaks.positions[1] - peaks.positions[0]).abs();
    let std = 0.5 * (peaks.stds[0] + peaks.stds[1]);
    let measured = separation / (2.0 * std);
    assert!((measured / 2.0 - 1.0).abs() < 0.10, "{measured}");
}

#[test]
fn conditions_examples() {
    let c = check_cat_conditions(7.0, BETA, 20.0).unwrap();
    assert!(c.resolvable && c.reachable && c.combined);
    let c = check_cat_conditions(2.0, BETA, 20.0).unwrap();
    assert!(!c.resolvable && c.reachable && c.combined);
    let c = check_cat_conditions(25.0, BETA, 20.0).unwrap();
    assert!(c.resolvable && !c.reachable && c.combined);
    // non-strict boundaries
    let c = check_cat_conditions(3.0, BETA, 3.0).unwrap();
    assert!(c.resolvable && c.reachable);
}

#[test]
fn overlap_examples() {
    let grid = QuadratureGrid::standard();
    let phi = |n: usize| {
        QuadratureWavefunction::from_fn(grid, Basis::P, |p| Complex64::new(eigenfunction(n, p).unwrap(), 0.0))
    };
    let (a, b) = (phi(0), phi(1));
    assert!((overlap(&a, &a).unwrap() - 1.0).abs() < 1e-10);
    assert!(overlap(&a, &b).unwrap() < 1e-8);
    let other = QuadratureWavefunction::from_fn(QuadratureGrid::symmetric(8.0, 128).unwrap(), Basis::P, |_| {
        Complex64::new(1.0, 0.0)
    });
    assert!(matches!(overlap(&a, &other), Err(Error::Domain(_))));
}

#[test]
fn exact_mu7_state_matches_approximation() {
    let p_r = 7.0 * BETA;
    let mu = mu_of_outcome(p_r, BETA, 20.0).unwrap().exact;
    let prep = CatPreparation::new(20.0, BETA, p_r, DEFAULT_TAIL_TOL).unwrap();
    let grid = QuadratureGrid::for_cat(mu).unwrap();
    let p = to_quadrature(&prep.cat, &grid, Basis::P).unwrap();
    let x = to_quadrature(&prep.cat, &grid, Basis::X).unwrap();
    let peaks = detect_peaks(&p).unwrap();
    assert_eq!(peaks.positions.len(), 2);
    for pos in &peaks.positions {
        assert!((pos.abs() / (2.0 * mu).sqrt() - 1.0).abs() < 0.05, "{pos}");
    }
    let f = fringe_metrics(&x).unwrap();
    assert!((f.period / (2.0 * PI / (2.0 * mu).sqrt()) - 1.0).abs() < 0.05);
    let approx = approx_p_wavefunction(&CatApproxParams::new(mu, BETA).unwrap(), &grid).unwrap();
    // frozen from the first evaluation
    let o = overlap(&p, &approx).unwrap();
    assert!(o >= 0.95 && (o - 0.99316).abs() < 5e-4, "{o}");
}

#[test]
fn emitted_wavefunctions_are_normalized() {
    for mu in [3.0, 5.0, 7.0, 10.0] {
        let (p, x) = approx_pair(mu);
        assert!((p.norm() - 1.0).abs() < 1e-6);
        assert!((x.norm() - 1.0).abs() < 1e-6);
        let prep = CatPreparation::new(20.0, BETA, outcome_for(mu, 20.0), DEFAULT_TAIL_TOL).unwrap();
        let grid = QuadratureGrid::for_cat(mu).unwrap();
        for basis in [Basis::P, Basis::X] {
            let wf = to_quadrature(&prep.cat, &grid, basis).unwrap();
            assert!((wf.norm() - 1.0).abs() < 1e-6, "mu {mu} {basis:?}");
        }
    }
}

#[test]
fn no_cat_and_no_fringes() {
    let grid = QuadratureGrid::standard();
    assert!(matches!(
        approx_p_wavefunction(&CatApproxParams::new(-0.5, BETA).unwrap(), &grid),
        Err(Error::NoCat { .. })
    ));
    let vac = QuadratureWavefunction::from_fn(grid, Basis::X, |x| Complex64::new((-x * x / 2.0).exp(), 0.0));
    assert!(matches!(fringe_metrics(&vac), Err(Error::NoFringe { .. })));
    let vac_p = QuadratureWavefunction::from_fn(grid, Basis::P, |x| Complex64::new((-x * x / 2.0).exp(), 0.0));
    let peaks = detect_peaks(&vac_p).unwrap();
    assert_eq!(peaks.positions.len(), 1);
    assert!(peaks.positions[0].abs() < 1e-12);
}
