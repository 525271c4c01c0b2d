//! Normalized harmonic-oscillator eigenfunctions.
//!
//! `phi_n(u) = pi^{-1/4} (2^n n!)^{-1/2} H_n(u) exp(-u^2/2)` is evaluated with the
//! normalized three-term recurrence
//!
//! ```text
//! phi_{n+1} = u sqrt(2/(n+1)) phi_n - sqrt(n/(n+1)) phi_{n-1}
//! ```
//!
//! The Gaussian prefactor is carried as a separate log-scale so that the
//! recurrence neither underflows for large `|u|` nor overflows for large `n`.

use crate::error::{Error, Result};

/// Largest index accepted by [`eigenfunction`].
pub const MAX_ORDER: usize = 2000;

const RESCALE_AT: f64 = 1e150;
const LN_PI_QUARTER: f64 = -0.286_182_471_462_350_1; // ln(pi^{-1/4})

/// Value of the `n`-th normalized oscillator eigenfunction at `u`.
pub fn eigenfunction(n: usize, u: f64) -> Result<f64> {
    if n > MAX_ORDER {
        return Err(Error::domain(format!(
            "eigenfunction order {n} exceeds the recurrence budget {MAX_ORDER}"
        )));
    }
    if !u.is_finite() {
        return Err(Error::domain(format!("non-finite argument {u}")));
    }
    let mut last = 0.0;
    for_each_order(n, u, |_, v| last = v);
    Ok(last)
}

/// `phi_0(u) .. phi_n_max(u)`.
pub fn eigenfunctions(n_max: usize, u: f64) -> Result<Vec<f64>> {
    if n_max > MAX_ORDER {
        return Err(Error::domain(format!(
            "eigenfunction order {n_max} exceeds the recurrence budget {MAX_ORDER}"
        )));
    }
    let mut out = Vec::with_capacity(n_max + 1);
    for_each_order(n_max, u, |_, v| out.push(v));
    Ok(out)
}

/// Runs the scaled recurrence and hands `(n, phi_n(u))` to `f` for every
/// `n <= n_max`. Callers validate the order budget.
pub(crate) fn for_each_order(n_max: usize, u: f64, mut f: impl FnMut(usize, f64)) {
    // phi_n = mantissa_n * exp(log_scale)
    let mut log_scale = LN_PI_QUARTER - 0.5 * u * u;
    let mut scale = log_scale.exp();
    let mut prev = 0.0_f64;
    let mut cur = 1.0_f64;
    f(0, cur * scale);
    for n in 0..n_max {
        let nf = n as f64;
        let next = u * (2.0 / (nf + 1.0)).sqrt() * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            prev /= RESCALE_AT;
            cur /= RESCALE_AT;
            log_scale += RESCALE_AT.ln();
            scale = log_scale.exp();
        }
        f(n + 1, cur * scale);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ground_state_at_origin() {
        let v = eigenfunction(0, 0.0).unwrap();
        assert!((v - PI.powf(-0.25)).abs() < 1e-15);
        assert!((v - 0.751126).abs() < 1e-6);
    }

    #[test]
    fn odd_orders_vanish_at_origin() {
        assert_eq!(eigenfunction(1, 0.0).unwrap(), 0.0);
        assert_eq!(eigenfunction(7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn second_order_matches_closed_form() {
        // pi^{-1/4} 8^{-1/2} H_2(u) e^{-u^2/2}, H_2(u) = 4u^2 - 2
        let direct = |u: f64| PI.powf(-0.25) / 8f64.sqrt() * (4.0 * u * u - 2.0) * (-u * u / 2.0).exp();
        assert!((eigenfunction(2, 0.0).unwrap() + 0.531126).abs() < 1e-6);
        for &u in &[-2.5, -0.3, 0.0, 1.1, 4.0] {
            assert!((eigenfunction(2, u).unwrap() - direct(u)).abs() < 1e-14);
        }
    }

    #[test]
    fn third_order_matches_closed_form() {
        // H_3(u) = 8u^3 - 12u, norm 2^3 3! = 48
        let direct = |u: f64| PI.powf(-0.25) / 48f64.sqrt() * (8.0 * u.powi(3) - 12.0 * u) * (-u * u / 2.0).exp();
        for &u in &[-1.7, 0.4, 2.2] {
            assert!((eigenfunction(3, u).unwrap() - direct(u)).abs() < 1e-14);
        }
    }

    #[test]
    fn order_budget_is_enforced() {
        assert!(eigenfunction(MAX_ORDER, 1.0).is_ok());
        assert!(matches!(eigenfunction(MAX_ORDER + 1, 1.0), Err(Error::Domain(_))));
        assert!(eigenfunction(3, f64::NAN).is_err());
    }

    #[test]
    fn large_argument_does_not_underflow_inside_turning_point() {
        // turning point of n = 2000 is sqrt(4001) ~ 63.3; the plain Gaussian
        // prefactor underflows at |u| ~ 38.6
        let v = eigenfunctions(2000, 45.0).unwrap();
        assert!(v[2000].is_finite() && v[2000] != 0.0);
        assert_eq!(v[0], 0.0);
        // WKB amplitude bound inside the classical region
        assert!(v[2000].abs() < 1.0);
    }

    #[test]
    fn vector_matches_pointwise() {
        let all = eigenfunctions(40, 1.3).unwrap();
        for (n, v) in all.iter().enumerate() {
            assert_eq!(*v, eigenfunction(n, 1.3).unwrap());
        }
    }
}
