//! The two QND measurement steps.
//!
//! Step one couples the transverse spin quadrature to a light quadrature
//! (`U = exp(-i alpha x_A x_P)`); reading out `p_P` leaves a squeezed state.
//! Step two couples the flip number to light (`U = exp(-i beta n_A x_R)`);
//! reading out `p_R` multiplies each number amplitude by
//! `exp(-(beta n - p_R)^2 / 2)`, which for suitable outcomes carves a
//! two-lobed superposition out of the squeezed state.

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand_distr::Normal;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::quadrature::{Basis, QuadratureGrid, QuadratureWavefunction};
use crate::rng::RandomSource;
use crate::state::{choose_truncation, NumberState};

/// Conditional norms below this are treated as an impossible outcome.
pub const IMPROBABLE_NORM: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqueezeParams {
    alpha: f64,
    xi2: f64,
}

impl SqueezeParams {
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::domain(format!("alpha = {alpha} must be finite and >= 0")));
        }
        Ok(SqueezeParams {
            alpha,
            xi2: alpha * alpha + 1.0,
        })
    }

    pub fn from_xi2(xi2: f64) -> Result<Self> {
        let alpha = alpha_from_xi2(xi2)?;
        Ok(SqueezeParams { alpha, xi2 })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn xi2(&self) -> f64 {
        self.xi2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumberQndParams {
    beta: f64,
}

impl NumberQndParams {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::domain(format!("beta = {beta} must be finite and > 0")));
        }
        Ok(NumberQndParams { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Step {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementOutcome {
    pub value: f64,
    pub step: Step,
}

pub fn alpha_from_xi2(xi2: f64) -> Result<f64> {
    if !(xi2 >= 1.0) || !xi2.is_finite() {
        return Err(Error::domain(format!("squeezing xi2 = {xi2} must be finite and >= 1")));
    }
    Ok((xi2 - 1.0).sqrt())
}

fn check_even_truncation(n_max: usize) -> Result<()> {
    if !n_max.is_multiple_of(2) {
        return Err(Error::domain(format!("squeezed states need an even n_max, got {n_max}")));
    }
    Ok(())
}

/// Recentred squeezed state, `c(n) = (r/2)^{n/2} sqrt(n!)/(n/2)!` for even
/// `n` with `r = (xi2-1)/(xi2+1)`, zero for odd `n`. Normalized.
pub fn squeezed_state_exact(xi2: f64, n_max: usize) -> Result<NumberState> {
    alpha_from_xi2(xi2)?;
    check_even_truncation(n_max)?;
    let ratio = (xi2 - 1.0) / (2.0 * (xi2 + 1.0));
    if ratio == 0.0 {
        return Ok(NumberState::vacuum(n_max));
    }
    let log_ratio = ratio.ln();
    let logs: Vec<f64> = (0..=n_max)
        .step_by(2)
        .map(|n| {
            let nf = n as f64;
            0.5 * nf * log_ratio + 0.5 * ln_gamma(nf + 1.0) - ln_gamma(nf / 2.0 + 1.0)
        })
        .collect();
    even_state_from_logs(&logs, n_max)
}

/// Large-`n` form of the squeezed coefficients, `c(n) = r^{n/2}`.
pub fn squeezed_state_stirling(xi2: f64, n_max: usize) -> Result<NumberState> {
    if !(xi2 > 1.0) || !xi2.is_finite() {
        return Err(Error::domain(format!(
            "the Stirling form needs xi2 > 1, got {xi2}"
        )));
    }
    check_even_truncation(n_max)?;
    let log_ratio = ((xi2 - 1.0) / (xi2 + 1.0)).ln();
    let logs: Vec<f64> = (0..=n_max)
        .step_by(2)
        .map(|n| 0.5 * n as f64 * log_ratio)
        .collect();
    even_state_from_logs(&logs, n_max)
}

fn even_state_from_logs(logs: &[f64], n_max: usize) -> Result<NumberState> {
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_max + 1];
    for (k, l) in logs.iter().enumerate() {
        amplitudes[2 * k] = Complex64::new((l - top).exp(), 0.0);
    }
    NumberState::new(amplitudes)?.normalize()
}

/// Atomic state after step one, before recentring, in the `x` basis:
/// `exp(-(alpha x - p_P)^2/2) exp(-x^2/2)`, normalized on `grid`.
pub fn conditional_first_step(
    alpha: f64,
    p_p: f64,
    grid: &QuadratureGrid,
) -> Result<QuadratureWavefunction> {
    let params = SqueezeParams::from_alpha(alpha)?;
    if !p_p.is_finite() {
        return Err(Error::domain(format!("outcome p_P = {p_p} is not finite")));
    }
    let center = alpha * p_p / params.xi2();
    let reach = 8.0 / params.xi2().sqrt();
    if grid.min() > center - reach || grid.max() < center + reach {
        return Err(Error::domain(format!(
            "grid [{}, {}] does not cover {center} ± {reach}",
            grid.min(),
            grid.max()
        )));
    }
    // completed square: exp(-xi2 (x - center)^2 / 2) up to a constant
    let xi2 = params.xi2();
    QuadratureWavefunction::from_fn(*grid, Basis::X, |x| {
        Complex64::new((-0.5 * xi2 * (x - center).powi(2)).exp(), 0.0)
    })
    .normalize()
}

/// Step-one outcome: `p_P ~ N(0, (1 + alpha^2)/2)`.
pub fn sample_first_outcome(alpha: f64, rng: &mut RandomSource) -> Result<MeasurementOutcome> {
    let params = SqueezeParams::from_alpha(alpha)?;
    let normal = Normal::new(0.0, (params.xi2() / 2.0).sqrt())
        .map_err(|e| Error::domain(e.to_string()))?;
    Ok(MeasurementOutcome {
        value: normal.sample(rng),
        step: Step::First,
    })
}

/// Conditions `state` on the step-two outcome `p_R`.
pub fn apply_number_qnd(state: &NumberState, beta: f64, p_r: f64) -> Result<NumberState> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!("beta = {beta} must be finite and >= 0")));
    }
    if !p_r.is_finite() {
        return Err(Error::domain(format!("outcome p_R = {p_r} is not finite")));
    }
    let amplitudes: Vec<Complex64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, a)| a * (-0.5 * (beta * n as f64 - p_r).powi(2)).exp())
        .collect();
    let conditioned = NumberState::new(amplitudes)?;
    let norm = conditioned.norm();
    if !(norm >= IMPROBABLE_NORM) {
        return Err(Error::ImprobableOutcome {
            outcome: p_r,
            norm,
            log_density: outcome_density_second(state, beta).log_pdf(p_r),
        });
    }
    conditioned.normalize()
}

/// Density of the step-two outcome: a Gaussian mixture with weights
/// `|c_n|^2`, means `beta n` and common variance 1/2.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDensity {
    weights: Vec<f64>,
    means: Vec<f64>,
}

impl OutcomeDensity {
    pub const VARIANCE: f64 = 0.5;

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn pdf(&self, p: f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.means)
            .map(|(w, m)| w * (-(p - m).powi(2)).exp())
            .sum::<f64>()
            / PI.sqrt()
    }

    /// `ln pdf(p)`, finite even where `pdf` underflows.
    pub fn log_pdf(&self, p: f64) -> f64 {
        let terms: Vec<f64> = self
            .weights
            .iter()
            .zip(&self.means)
            .map(|(w, m)| w.ln() - (p - m).powi(2))
            .collect();
        let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return top;
        }
        top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln() - 0.5 * PI.ln()
    }

    pub fn cdf(&self, p: f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.means)
            .map(|(w, m)| 0.5 * w * erfc(m - p))
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.weights.iter().zip(&self.means).map(|(w, m)| w * m).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        Self::VARIANCE
            + self
                .weights
                .iter()
                .zip(&self.means)
                .map(|(w, m)| w * (m - mean).powi(2))
                .sum::<f64>()
    }
}

pub fn outcome_density_second(state: &NumberState, beta: f64) -> OutcomeDensity {
    let total: f64 = state.populations().iter().sum();
    let (weights, means) = state
        .populations()
        .into_iter()
        .enumerate()
        .filter(|(_, w)| *w > 0.0)
        .map(|(n, w)| (w / total, beta * n as f64))
        .unzip();
    OutcomeDensity { weights, means }
}

/// Draws `n` with probability `|c_n|^2`, then `p_R ~ N(beta n, 1/2)`.
pub fn sample_second_outcome(
    state: &NumberState,
    beta: f64,
    rng: &mut RandomSource,
) -> Result<MeasurementOutcome> {
    let index = WeightedIndex::new(state.populations())
        .map_err(|e| Error::Degenerate(format!("cannot sample flip number: {e}")))?;
    let n = index.sample(rng);
    let normal =
        Normal::new(beta * n as f64, FRAC_1_SQRT_2).map_err(|e| Error::domain(e.to_string()))?;
    Ok(MeasurementOutcome {
        value: normal.sample(rng),
        step: Step::Second,
    })
}

/// Conditional mean flip number inferred from `p_R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuEstimate {
    pub exact: f64,
    pub approx: f64,
}

/// `mu = p_R/beta + ln((xi2-1)/(xi2+1)) / (2 beta^2)`, alongside `p_R/beta`.
pub fn mu_of_outcome(p_r: f64, beta: f64, xi2: f64) -> Result<MuEstimate> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!("beta = {beta} must be finite and > 0")));
    }
    if !(xi2 > 1.0) || !xi2.is_finite() {
        return Err(Error::domain(format!("mu needs xi2 > 1, got {xi2}")));
    }
    let approx = p_r / beta;
    let log_ratio = (-2.0 / (xi2 + 1.0)).ln_1p();
    Ok(MuEstimate {
        exact: approx + log_ratio / (2.0 * beta * beta),
        approx,
    })
}

/// One complete protocol run as persisted by the command-line front end.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTrace {
    pub seed: Option<u64>,
    pub xi2: f64,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "p_P")]
    pub p_p: Option<f64>,
    #[serde(rename = "p_R")]
    pub p_r: f64,
    pub mu_exact: Option<f64>,
    pub mu_approx: f64,
    pub n_max: usize,
    pub state_file: Option<String>,
}

/// Squeezed parent and conditional cat state for a given step-two outcome.
#[derive(Clone, Debug)]
pub struct CatPreparation {
    pub squeeze: SqueezeParams,
    pub beta: f64,
    pub p_r: f64,
    pub n_max: usize,
    pub squeezed: NumberState,
    pub cat: NumberState,
}

impl CatPreparation {
    /// Truncation is chosen for the requested outcome with `tail_tol`.
    pub fn new(xi2: f64, beta: f64, p_r: f64, tail_tol: f64) -> Result<Self> {
        let squeeze = SqueezeParams::from_xi2(xi2)?;
        let qnd = NumberQndParams::new(beta)?;
        if !p_r.is_finite() {
            return Err(Error::domain(format!("outcome p_R = {p_r} is not finite")));
        }
        let n_max = choose_truncation(xi2, beta, (p_r / beta).max(0.0), tail_tol)?;
        let squeezed = squeezed_state_exact(xi2, n_max)?;
        let cat = apply_number_qnd(&squeezed, qnd.beta(), p_r)?;
        Ok(CatPreparation {
            squeeze,
            beta,
            p_r,
            n_max,
            squeezed,
            cat,
        })
    }
}
