use proptest::prelude::*;
use spincat::feasibility::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn free_space_preset() {
    let r = evaluate_scenario(&ExperimentalParams::bec_free_space()).unwrap();
    assert_eq!(r.xi2_max_depth, 50.0);
    assert!((r.depth_threshold - 21_715.0).abs() < 1.0, "{}", r.depth_threshold);
    assert_eq!(r.depth_flag, DepthFlag::Marginal);
    assert!(!r.depth_condition_met);
    assert!(!r.cavity_applied);
    assert!((r.xi2_required_cat - 73.68).abs() < 0.01);
    assert!(rel(r.rotation_tolerance, 3.16e-5) < 0.01);
    assert!(rel(r.rotation_tolerance, 3e-5) < 0.10);
    assert!(rel(r.cat_lifetime, 2e-3) < 1e-12);
    assert!(r.coherence_ok);
    assert_eq!(r.kappa_detuned, 0.25);
    assert_eq!(r.theta_detuned, 50.0);
}

#[test]
fn cavity_preset() {
    let r = evaluate_scenario(&ExperimentalParams::bec_cavity()).unwrap();
    assert!(r.cavity_applied);
    assert_eq!(r.xi2_required_cat, 10.0);
    assert_eq!(r.effective_depth, 400.0);
    assert_eq!(r.xi2_max_depth, 10.0);
    assert_eq!(r.depth_flag, DepthFlag::Met);
    assert!(r.depth_condition_met);
    assert!(rel(r.rotation_tolerance, 3.16e-3) < 0.01);
    assert!(rel(r.rotation_tolerance, 1.0 / 300.0) < 0.10);
    assert!(rel(r.cat_lifetime, 1e-2) < 1e-12);
    assert!(r.squeezing_sufficient);
}

#[test]
fn stage_is_named_for_cavity_violation() {
    let mut p = ExperimentalParams::bec_cavity();
    p.delta = 100.0;
    let err = evaluate_scenario(&p).unwrap_err();
    match err {
        spincat::Error::Stage { stage, .. } => assert_eq!(stage, "cavity_enhancement"),
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn operation_examples() {
    let o = detuned_optics(1e4, 1.0, 100.0).unwrap();
    assert_eq!((o.kappa_detuned, o.theta_detuned), (0.25, 50.0));
    let far = detuned_optics(1e4, 1.0, 200.0).unwrap();
    assert_eq!(o.kappa_detuned / far.kappa_detuned, 4.0);
    assert!(detuned_optics(1e4, 1.0, 5.0).is_err());

    assert_eq!(max_squeezing_depth(1e4).unwrap(), 50.0);
    assert_eq!(max_squeezing_depth(4.0).unwrap(), 1.0);
    assert_eq!(max_squeezing_depth(400.0).unwrap(), 10.0);

    assert!(coherence_ok(0.01, 50.0));
    assert!(!coherence_ok(0.05, 50.0));
    assert!(coherence_ok(0.9, 1.0));

    let c = cat_conditions_experimental(1e4, 4e5, 1.0).unwrap();
    assert!(!c.depth_ok);
    let c = cat_conditions_experimental(10.0, 1e3, 0.05).unwrap();
    assert!(c.depth_ok && c.xi2_required == 10.0);
    let c = cat_conditions_experimental(4.0, 1.0, 1.0).unwrap();
    assert!(c.depth_ok && c.xi2_required == 1.0);
    assert!(!cat_conditions_experimental(3.99, 1.0, 1.0).unwrap().depth_ok);

    assert!((cavity_enhancement(0.001, 0.05).unwrap() - 0.04).abs() < 1e-15);
    assert!((cavity_enhancement(0.001, 1.0 - 1e-12).unwrap() - 0.002).abs() < 1e-12);
    assert!(cavity_enhancement(0.02, 0.05).is_err());

    assert!((polarization_limit(0.99).unwrap() - 100.0).abs() < 1e-9);
    assert_eq!(polarization_limit(0.5).unwrap(), 2.0);
    assert!((polarization_limit(0.9999).unwrap() - 1e4).abs() < 1e-6);

    assert!(rel(rotation_tolerance(50.0, 4e5).unwrap(), 1.0 / (50.0 * 4e5f64.sqrt())) < 1e-15);
    assert_eq!(rotation_tolerance(1.0, 1.0).unwrap(), 1.0);
    assert_eq!(cat_lifetime(0.1, 50.0).unwrap(), 0.1 / 50.0);
    assert_eq!(cat_lifetime(0.3, 1.0).unwrap(), 0.3);
}

#[test]
fn coupling_for_free_space_numbers() {
    // N_p chosen so that eta = 0.02
    let n_p = 0.02 * 4e5 / 0.25;
    let c = coupling_chain(50.0, 0.25, 4e5, n_p).unwrap();
    assert!((c.eta - 0.02).abs() < 1e-15);
    assert!(rel(c.xi2, 1e4 * c.eta / 4.0) < 1e-12);
    assert!(rel(c.xi2, 50.0) < 1e-12);
    let doubled = coupling_chain(50.0, 0.25, 4e5, 2.0 * n_p).unwrap();
    assert_eq!(doubled.eta / c.eta, 2.0);
    assert!(rel(doubled.xi2 / c.xi2, 2.0) < 1e-15);
}

fn log_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|k| lo * (hi / lo).powf(k as f64 / (steps - 1) as f64))
        .collect()
}

#[test]
fn combined_condition_implied_by_squeezing_requirement() {
    let mut checked = 0;
    for kappa0 in log_grid(10.0, 1e5, 9) {
        for n_atoms in log_grid(10.0, 1e7, 13) {
            for n_photons in log_grid(1e2, 1e10, 17) {
                let o = detuned_optics(kappa0, 1.0, 100.0).unwrap();
                let c = coupling_chain(o.theta_detuned, o.kappa_detuned, n_atoms, n_photons).unwrap();
                // beta^2 N_a = 8 xi2 exactly, so beta xi2 = 2 sqrt(2) xi^3 / sqrt(N_a)
                assert!(rel(c.beta * c.beta * n_atoms / c.xi2, 8.0) < 1e-12);
                if c.xi2 >= n_atoms.cbrt() {
                    assert!(c.beta * c.xi2 >= 2.0 * 2f64.sqrt() * (1.0 - 1e-12));
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100, "{checked}");
}

fn params(kappa0: f64, n_photons: f64) -> ExperimentalParams {
    ExperimentalParams {
        kappa0,
        n_photons,
        ..ExperimentalParams::bec_free_space()
    }
}

proptest! {
    #[test]
    fn algebraic_identities(
        kappa0 in 1e-1f64..1e6,
        ratio in 10.0f64..1e4,
        gamma in 1e-3f64..1e3,
        n_atoms in 1.0f64..1e9,
        n_photons in 1.0f64..1e12,
    ) {
        let o = detuned_optics(kappa0, gamma, ratio * gamma).unwrap();
        prop_assert!(rel(o.theta_detuned.powi(2) / o.kappa_detuned, kappa0) < 1e-12);
        let c = coupling_chain(o.theta_detuned, o.kappa_detuned, n_atoms, n_photons).unwrap();
        prop_assert!(rel(c.xi2, kappa0 * c.eta / 4.0) < 1e-12);
        prop_assert!(rel(c.beta * c.beta * n_atoms / c.xi2, 8.0) < 1e-12);
    }

    #[test]
    fn monotonicity(
        kappa0 in 1.0f64..1e5,
        n_photons in 1e2f64..1e7,
        factor in 1.0f64..10.0,
        xi2 in 1.0f64..100.0,
        n_atoms in 1.0f64..1e7,
    ) {
        let base = evaluate_scenario(&params(kappa0, n_photons)).unwrap();
        let deeper = evaluate_scenario(&params(kappa0 * factor, n_photons)).unwrap();
        let brighter = evaluate_scenario(&params(kappa0, n_photons * factor)).unwrap();
        prop_assert!(deeper.xi2_achieved >= base.xi2_achieved);
        prop_assert!(brighter.xi2_achieved >= base.xi2_achieved);
        if factor > 1.0 {
            let r = rotation_tolerance(xi2, n_atoms).unwrap();
            prop_assert!(rotation_tolerance(xi2 * factor, n_atoms).unwrap() < r);
            prop_assert!(rotation_tolerance(xi2, n_atoms * factor).unwrap() < r);
        }
    }

    #[test]
    fn report_booleans_are_consistent(kappa0 in 1.0f64..1e5, n_photons in 1e2f64..1e7) {
        let r = evaluate_scenario(&params(kappa0, n_photons)).unwrap();
        prop_assert_eq!(r.depth_condition_met, r.effective_depth >= r.depth_threshold);
        prop_assert_eq!(r.combined_condition, r.beta * r.xi2_achieved > 1.0);
        prop_assert_eq!(r.squeezing_sufficient, r.xi2_achieved >= r.xi2_required_cat);
        prop_assert!(r.xi2_achieved <= r.xi2_raw && r.xi2_achieved <= r.xi2_max_depth);
        let json = serde_json::to_value(&r).unwrap();
        for (k, v) in json.as_object().unwrap() {
            if let Some(x) = v.as_f64() {
                prop_assert!(x.is_finite(), "{}", k);
            }
        }
    }
}
