//! Analytic cat-state approximations, lobe and fringe detection, and the
//! observability conditions.
//!
//! With the number distribution centred at `mu` with resolution `1/beta`
//! and `n ≈ p^2/2`, the state is two Gaussian lobes at `p = ±sqrt(2 mu)`.
//! Its conjugate representation is a Gaussian envelope times
//! `cos(x sqrt(2 mu))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{Basis, QuadratureGrid, QuadratureWavefunction};

/// Local maxima below this fraction of the global maximum are ignored.
pub const PEAK_THRESHOLD: f64 = 0.05;
/// The fringe region is where `|psi|` exceeds this fraction of its maximum.
pub const ENVELOPE_THRESHOLD: f64 = 0.01;
/// Minimum grid points per fringe period for the analytic `x` form.
pub const POINTS_PER_FRINGE: f64 = 16.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatApproxParams {
    mu: f64,
    beta: f64,
}

impl CatApproxParams {
    pub fn new(mu: f64, beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::domain(format!("beta = {beta} must be finite and > 0")));
        }
        if !mu.is_finite() {
            return Err(Error::domain(format!("mu = {mu} is not finite")));
        }
        Ok(CatApproxParams { mu, beta })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn require_cat(&self) -> Result<f64> {
        if self.mu > 0.0 {
            Ok((2.0 * self.mu).sqrt())
        } else {
            Err(Error::NoCat { mu: self.mu })
        }
    }
}

/// Two lobes `exp(-(p ∓ sqrt(2mu))^2 beta^2 mu)`, normalized.
pub fn approx_p_wavefunction(
    params: &CatApproxParams,
    grid: &QuadratureGrid,
) -> Result<QuadratureWavefunction> {
    let center = params.require_cat()?;
    let width = params.beta * params.beta * params.mu;
    QuadratureWavefunction::from_fn(*grid, Basis::P, |p| {
        let v = (-(p - center).powi(2) * width).exp() + (-(p + center).powi(2) * width).exp();
        Complex64::new(v, 0.0)
    })
    .normalize()
}

/// `exp(-x^2/(4 beta^2 mu)) cos(x sqrt(2mu))`, normalized.
pub fn approx_x_wavefunction(
    params: &CatApproxParams,
    grid: &QuadratureGrid,
) -> Result<QuadratureWavefunction> {
    let k = params.require_cat()?;
    let period = 2.0 * PI / k;
    let required = period / POINTS_PER_FRINGE;
    if grid.spacing() > required * (1.0 + 1e-12) {
        return Err(Error::Resolution {
            spacing: grid.spacing(),
            required,
        });
    }
    let envelope = 4.0 * params.beta * params.beta * params.mu;
    QuadratureWavefunction::from_fn(*grid, Basis::X, |x| {
        Complex64::new((-x * x / envelope).exp() * (x * k).cos(), 0.0)
    })
    .normalize()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peaks {
    pub positions: Vec<f64>,
    /// Width of each lobe as the `|psi|`-weighted standard deviation over its
    /// basin, i.e. the `sigma` of an amplitude profile `exp(-(p-c)^2/(2 sigma^2))`.
    pub stds: Vec<f64>,
}

/// Vertex `(offset, value)` of the parabola through three equally spaced
/// samples; `offset` is in units of the spacing relative to the middle one.
fn parabolic_vertex(left: f64, mid: f64, right: f64) -> (f64, f64) {
    let curvature = left - 2.0 * mid + right;
    if curvature == 0.0 {
        return (0.0, mid);
    }
    let offset = 0.5 * (left - right) / curvature;
    let value = mid - 0.125 * (left - right).powi(2) / curvature;
    (offset.clamp(-1.0, 1.0), value)
}

fn refine(grid: &QuadratureGrid, d: &[f64], k: usize) -> (f64, f64) {
    if k == 0 || k + 1 >= d.len() {
        return (grid.point(k), d[k]);
    }
    let (offset, value) = parabolic_vertex(d[k - 1], d[k], d[k + 1]);
    (grid.point(k) + offset * grid.spacing(), value)
}

/// Lobes of `|psi|^2` in the `p` basis.
pub fn detect_peaks(wf: &QuadratureWavefunction) -> Result<Peaks> {
    if wf.basis() != Basis::P {
        return Err(Error::domain("peak detection expects a p-basis wavefunction"));
    }
    let d = wf.density();
    let top = d.iter().cloned().fold(0.0, f64::max);
    if !(top > 0.0) {
        return Err(Error::Degenerate("wavefunction vanishes on the grid".into()));
    }
    let grid = wf.grid();
    let amp: Vec<f64> = wf.values().iter().map(|v| v.norm()).collect();
    let mut peaks = Peaks {
        positions: Vec::new(),
        stds: Vec::new(),
    };
    for k in 1..d.len() - 1 {
        if !(d[k] > d[k - 1] && d[k] >= d[k + 1] && d[k] >= PEAK_THRESHOLD * top) {
            continue;
        }
        let (position, _) = refine(grid, &d, k);
        let mut lo = k;
        while lo > 0 && d[lo - 1] <= d[lo] {
            lo -= 1;
        }
        let mut hi = k;
        while hi + 1 < d.len() && d[hi + 1] <= d[hi] {
            hi += 1;
        }
        let (mut mass, mut second) = (0.0, 0.0);
        for (j, a) in amp.iter().enumerate().take(hi + 1).skip(lo) {
            let offset = grid.point(j) - position;
            mass += a;
            second += a * offset * offset;
        }
        peaks.positions.push(position);
        peaks.stds.push((second / mass).sqrt());
    }
    if peaks.positions.is_empty() {
        return Err(Error::Degenerate("no peak above threshold".into()));
    }
    Ok(peaks)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fringes {
    pub period: f64,
    pub visibility: f64,
    /// Zero crossings of `Re psi` used for the period estimate.
    pub crossings: usize,
}

/// Fringe period and central visibility of an `x`-basis wavefunction.
pub fn fringe_metrics(wf: &QuadratureWavefunction) -> Result<Fringes> {
    if wf.basis() != Basis::X {
        return Err(Error::domain("fringe analysis expects an x-basis wavefunction"));
    }
    let grid = wf.grid();
    let amp: Vec<f64> = wf.values().iter().map(|v| v.norm()).collect();
    let top = amp.iter().cloned().fold(0.0, f64::max);
    if !(top > 0.0) {
        return Err(Error::NoFringe { crossings: 0 });
    }
    let inside: Vec<usize> = (0..amp.len())
        .filter(|&k| amp[k] >= ENVELOPE_THRESHOLD * top)
        .collect();
    let (lo, hi) = (inside[0], *inside.last().expect("non-empty"));

    let re: Vec<f64> = wf.values().iter().map(|v| v.re).collect();
    let mut zeros = Vec::new();
    for k in lo..hi {
        let (a, b) = (re[k], re[k + 1]);
        if a == 0.0 {
            zeros.push(grid.point(k));
        } else if a * b < 0.0 {
            zeros.push(grid.point(k) + grid.spacing() * a / (a - b));
        }
    }
    if zeros.len() < 3 {
        return Err(Error::NoFringe {
            crossings: zeros.len(),
        });
    }
    let period = 2.0 * (zeros[zeros.len() - 1] - zeros[0]) / (zeros.len() - 1) as f64;

    let d = wf.density();
    let n = d.len();
    let is_max = |k: usize| d[k] > d[k - 1] && d[k] >= d[k + 1];
    let is_min = |k: usize| d[k] < d[k - 1] && d[k] <= d[k + 1];
    let centre = (1..n - 1)
        .filter(|&k| is_max(k))
        .min_by(|&a, &b| grid.point(a).abs().total_cmp(&grid.point(b).abs()))
        .ok_or(Error::NoFringe {
            crossings: zeros.len(),
        })?;
    let left = (1..centre).rev().find(|&k| is_min(k));
    let right = (centre + 1..n - 1).find(|&k| is_min(k));
    let minimum = [left, right]
        .into_iter()
        .flatten()
        .map(|k| refine(grid, &d, k).1.max(0.0))
        .fold(f64::INFINITY, f64::min);
    if !minimum.is_finite() {
        return Err(Error::NoFringe {
            crossings: zeros.len(),
        });
    }
    let maximum = refine(grid, &d, centre).1;
    let visibility = ((maximum - minimum) / (maximum + minimum)).clamp(0.0, 1.0);
    Ok(Fringes {
        period,
        visibility,
        crossings: zeros.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatConditions {
    /// `mu >= 1/beta`: lobes separated by more than their width, and fringe
    /// period shorter than the envelope.
    pub resolvable: bool,
    /// `mu <= xi2`: the outcome is within reach of the squeezed parent.
    pub reachable: bool,
    /// `beta xi2 > 1`: both can hold at once.
    pub combined: bool,
}

pub fn check_cat_conditions(mu: f64, beta: f64, xi2: f64) -> Result<CatConditions> {
    if !(beta > 0.0) {
        return Err(Error::domain(format!("beta = {beta} must be > 0")));
    }
    Ok(CatConditions {
        resolvable: mu >= 1.0 / beta,
        reachable: mu <= xi2,
        combined: beta * xi2 > 1.0,
    })
}

/// `|<a|b>|` for normalized wavefunctions on the same grid and basis.
pub fn overlap(a: &QuadratureWavefunction, b: &QuadratureWavefunction) -> Result<f64> {
    Ok(a.inner(b)?.norm().min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatMetrics {
    pub mu: f64,
    pub beta: f64,
    pub xi2: f64,
    pub peak_positions: (f64, f64),
    pub peak_std: f64,
    pub peak_separation: f64,
    pub fringe_period: f64,
    pub envelope_std: f64,
    pub visibility: f64,
    pub resolvable: bool,
    pub reachable: bool,
    pub combined: bool,
}

impl CatMetrics {
    /// Closed-form values for the two-lobe approximation.
    pub fn analytic(params: &CatApproxParams, xi2: f64) -> Result<Self> {
        let k = params.require_cat()?;
        let conditions = check_cat_conditions(params.mu, params.beta, xi2)?;
        Ok(CatMetrics {
            mu: params.mu,
            beta: params.beta,
            xi2,
            peak_positions: (-k, k),
            peak_std: 1.0 / (params.beta * k),
            peak_separation: 2.0 * k,
            fringe_period: 2.0 * PI / k,
            envelope_std: params.beta * k,
            visibility: 1.0,
            resolvable: conditions.resolvable,
            reachable: conditions.reachable,
            combined: conditions.combined,
        })
    }

    /// Metrics read off numerically from a state's two representations.
    /// Expects exactly two lobes in `p_wf`.
    pub fn measured(
        p_wf: &QuadratureWavefunction,
        x_wf: &QuadratureWavefunction,
        mu: f64,
        beta: f64,
        xi2: f64,
    ) -> Result<Self> {
        let peaks = detect_peaks(p_wf)?;
        if peaks.positions.len() != 2 {
            return Err(Error::Degenerate(format!(
                "expected two lobes, found {}",
                peaks.positions.len()
            )));
        }
        let fringes = fringe_metrics(x_wf)?;
        let (_, var_x) = x_wf.coordinate_moments();
        let conditions = check_cat_conditions(mu, beta, xi2)?;
        let (a, b) = (peaks.positions[0], peaks.positions[1]);
        Ok(CatMetrics {
            mu,
            beta,
            xi2,
            peak_positions: (a.min(b), a.max(b)),
            peak_std: 0.5 * (peaks.stds[0] + peaks.stds[1]),
            peak_separation: (b - a).abs(),
            fringe_period: fringes.period,
            // |psi|^2 of envelope^2 cos^2 has variance sigma_env^2 / 2
            envelope_std: (2.0 * var_x).sqrt(),
            visibility: fringes.visibility,
            resolvable: conditions.resolvable,
            reachable: conditions.reachable,
            combined: conditions.combined,
        })
    }
}
