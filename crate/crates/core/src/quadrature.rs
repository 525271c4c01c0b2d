//! Quadrature-space wavefunctions on uniform grids and the transforms that
//! produce them.
//!
//! The momentum-like representation uses the real matrix elements
//! `<p|n> = phi_n(p)`. The conjugate representation is defined as the
//! continuous Fourier transform with kernel `e^{ixp}/sqrt(2 pi)`, which makes
//! the transform its own conjugate partner: applying it twice reflects
//! the input through the origin.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

use crate::error::{Error, Result};
use crate::hermite;
use crate::state::NumberState;

/// Populations below this fraction of the total are ignored when judging
/// the bandwidth of a state.
const SUPPORT_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    P,
}

impl Basis {
    pub fn conjugate(self) -> Basis {
        match self {
            Basis::X => Basis::P,
            Basis::P => Basis::X,
        }
    }
}

/// Uniform grid `min, min + h, ..., max` with `count` points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    min: f64,
    max: f64,
    count: usize,
}

impl QuadratureGrid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || !(min < max) {
            return Err(Error::domain(format!("grid bounds [{min}, {max}] are not increasing")));
        }
        if count < 2 {
            return Err(Error::domain(format!("grid needs at least 2 points, got {count}")));
        }
        Ok(QuadratureGrid { min, max, count })
    }

    pub fn symmetric(half_width: f64, count: usize) -> Result<Self> {
        Self::new(-half_width, half_width, count)
    }

    /// `±8` with 256 points; adequate for states close to the vacuum.
    pub fn standard() -> Self {
        Self::symmetric(8.0, 256).expect("valid constants")
    }

    /// `±(sqrt(2 mu) + 8)` with the smallest power-of-two point count giving
    /// at least 16 points per fringe period `2 pi / sqrt(2 mu)`.
    pub fn for_cat(mu: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::NoCat { mu });
        }
        let k = (2.0 * mu).sqrt();
        let half_width = k + 8.0;
        let period = 2.0 * PI / k;
        let needed = (16.0 * 2.0 * half_width / period).ceil() as usize + 1;
        Self::symmetric(half_width, needed.next_power_of_two())
    }

    /// Grid for a squeezed state: `±8 xi` covers the broad quadrature and the
    /// spacing resolves the narrow one (`h <= 1/(4 xi)`).
    pub fn for_squeezed(xi2: f64) -> Result<Self> {
        if !(xi2 >= 1.0) || !xi2.is_finite() {
            return Err(Error::domain(format!("xi2 = {xi2} must be finite and >= 1")));
        }
        let xi = xi2.sqrt();
        let half_width = 8.0 * xi;
        let needed = (2.0 * half_width * 4.0 * xi).ceil() as usize + 1;
        Self::symmetric(half_width, needed.next_power_of_two().max(256))
    }

    /// Same range with the point count doubled until the spacing resolves
    /// every eigenfunction `state` occupies.
    pub fn resolving(self, state: &NumberState) -> Result<Self> {
        const MAX_POINTS: usize = 1 << 20;
        let required = resolution_bound(state.support_edge(SUPPORT_TOL));
        let mut grid = self;
        while grid.spacing() > required {
            if grid.count >= MAX_POINTS {
                return Err(Error::Resolution {
                    spacing: grid.spacing(),
                    required,
                });
            }
            grid = Self::new(grid.min, grid.max, 2 * grid.count)?;
        }
        Ok(grid)
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        // interpolate from both ends so the grid is exactly mirror-symmetric
        let last = (self.count - 1) as f64;
        if 2 * k < self.count {
            self.min + (self.max - self.min) * (k as f64 / last)
        } else {
            self.max - (self.max - self.min) * ((self.count - 1 - k) as f64 / last)
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.point(k)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (self.min + self.max).abs() <= 1e-12 * self.max.abs().max(self.min.abs())
    }

    /// Index of the grid point closest to `value` (clamped to the grid).
    pub fn nearest_index(&self, value: f64) -> usize {
        let k = ((value - self.min) / self.spacing()).round();
        k.clamp(0.0, (self.count - 1) as f64) as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureWavefunction {
    grid: QuadratureGrid,
    values: Vec<Complex64>,
    basis: Basis,
}

impl QuadratureWavefunction {
    pub fn new(grid: QuadratureGrid, values: Vec<Complex64>, basis: Basis) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(Error::domain(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.count()
            )));
        }
        Ok(QuadratureWavefunction { grid, values, basis })
    }

    /// Samples `f` on every grid point.
    pub fn from_fn(grid: QuadratureGrid, basis: Basis, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.points().into_iter().map(f).collect();
        QuadratureWavefunction { grid, values, basis }
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// `|psi|^2` on the grid.
    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// `sqrt(sum |psi|^2 h)`.
    pub fn norm(&self) -> f64 {
        (self.density().iter().sum::<f64>() * self.grid.spacing()).sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Degenerate(format!("wavefunction norm {norm}")));
        }
        Ok(QuadratureWavefunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v / norm).collect(),
            basis: self.basis,
        })
    }

    /// Riemann inner product `<self|other>`.
    pub fn inner(&self, other: &QuadratureWavefunction) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::domain("inner product of wavefunctions on different grids"));
        }
        if self.basis != other.basis {
            return Err(Error::domain("inner product of wavefunctions in different bases"));
        }
        let sum: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(sum * self.grid.spacing())
    }

    /// Mean and variance of the coordinate under `|psi|^2`, assuming unit norm.
    pub fn coordinate_moments(&self) -> (f64, f64) {
        let h = self.grid.spacing();
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for (k, d) in self.density().into_iter().enumerate() {
            let q = self.grid.point(k);
            m1 += q * d;
            m2 += q * q * d;
        }
        let mean = m1 * h;
        (mean, m2 * h - mean * mean)
    }

    /// CSV with header `coord,re,im,abs2`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "coord,re,im,abs2")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                self.grid.point(k),
                v.re,
                v.im,
                v.norm_sqr()
            )?;
        }
        Ok(())
    }
}

/// Largest grid spacing that samples every eigenfunction up to `n` with at
/// least four points per local wavelength `2 pi / sqrt(2n + 1)`.
pub fn resolution_bound(n: usize) -> f64 {
    PI / (2.0 * (2.0 * n as f64 + 1.0).sqrt())
}

/// Expands `state` on `grid` in the requested basis.
pub fn to_quadrature(
    state: &NumberState,
    grid: &QuadratureGrid,
    basis: Basis,
) -> Result<QuadratureWavefunction> {
    if state.norm() == 0.0 {
        return Err(Error::Degenerate("cannot expand the zero state".into()));
    }
    let edge = state.support_edge(SUPPORT_TOL);
    let required = resolution_bound(edge);
    if grid.spacing() > required {
        return Err(Error::Resolution {
            spacing: grid.spacing(),
            required,
        });
    }
    // amplitudes far beyond the support edge contribute nothing measurable
    let last = state.support_edge(1e-30);
    if last > hermite::MAX_ORDER {
        return Err(Error::domain(format!(
            "state occupies n = {last}, beyond the eigenfunction budget {}",
            hermite::MAX_ORDER
        )));
    }
    let amps = &state.amplitudes()[..=last];
    let values: Vec<Complex64> = grid
        .points()
        .par_iter()
        .map(|&p| {
            let mut acc = Complex64::new(0.0, 0.0);
            hermite::for_each_order(last, p, |n, phi| acc += amps[n] * phi);
            acc
        })
        .collect();
    let p_rep = QuadratureWavefunction::new(*grid, values, Basis::P)?;
    match basis {
        Basis::P => Ok(p_rep),
        Basis::X => fourier_pair(&p_rep),
    }
}

/// Discretized continuous Fourier transform into the conjugate basis on the
/// same grid: `out(q) = h/sqrt(2 pi) sum_j e^{i q q_j} psi(q_j)`.
pub fn fourier_pair(wf: &QuadratureWavefunction) -> Result<QuadratureWavefunction> {
    let grid = *wf.grid();
    if !grid.is_symmetric() {
        return Err(Error::domain(format!(
            "Fourier transform needs a grid symmetric about 0, got [{}, {}]",
            grid.min(),
            grid.max()
        )));
    }
    let points = grid.points();
    let h = grid.spacing();
    let weight = h / (2.0 * PI).sqrt();
    let values: Vec<Complex64> = points
        .par_iter()
        .map(|&q| {
            // e^{i q q_j} advanced by e^{i q h}; resynchronized to bound drift
            let step = Complex64::from_polar(1.0, q * h);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut phase = Complex64::new(0.0, 0.0);
            for (j, v) in wf.values.iter().enumerate() {
                if j % 256 == 0 {
                    phase = Complex64::from_polar(1.0, q * points[j]);
                }
                acc += phase * v;
                phase *= step;
            }
            acc * weight
        })
        .collect();
    QuadratureWavefunction::new(grid, values, wf.basis.conjugate())
}
