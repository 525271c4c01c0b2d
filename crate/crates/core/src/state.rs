//! Truncated flip-number representation of the rescaled collective spin.
//!
//! Near the fully polarized pole the rescaled transverse spin components
//! behave as oscillator quadratures and the flip number `n` as the
//! occupation number. A [`NumberState`] holds amplitudes for `n = 0..=n_max`.

use num_complex::Complex64;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Default tail-mass tolerance for [`choose_truncation`].
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;
/// Largest truncation [`choose_truncation`] will return.
pub const TRUNCATION_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct NumberState {
    amplitudes: Vec<Complex64>,
}

/// Second moments of the quadratures, computed from ladder-operator algebra.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureMoments {
    pub mean_n: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
}

impl NumberState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::domain("a number state needs at least one amplitude"));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::domain("non-finite amplitude"));
        }
        Ok(NumberState { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// `|n>` truncated at `n_max`.
    pub fn basis(n: usize, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(Error::domain(format!("basis index {n} beyond n_max {n_max}")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_max + 1];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(NumberState { amplitudes })
    }

    pub fn vacuum(n_max: usize) -> Self {
        Self::basis(0, n_max).expect("0 <= n_max")
    }

    pub fn n_max(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Degenerate(format!("cannot normalize state with norm {norm}")));
        }
        Ok(NumberState {
            amplitudes: self.amplitudes.iter().map(|a| a / norm).collect(),
        })
    }

    /// `<self|other>`; the shorter vector is implicitly zero-padded.
    pub fn inner(&self, other: &NumberState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Largest `n` whose population exceeds `rel_tol` times the total.
    pub fn support_edge(&self, rel_tol: f64) -> usize {
        let total: f64 = self.populations().iter().sum();
        self.amplitudes
            .iter()
            .rposition(|a| a.norm_sqr() > rel_tol * total)
            .unwrap_or(0)
    }

    /// True when every odd-`n` amplitude is exactly `+0.0`.
    pub fn has_even_parity(&self) -> bool {
        self.amplitudes
            .iter()
            .skip(1)
            .step_by(2)
            .all(|a| a.re.to_bits() == 0 && a.im.to_bits() == 0)
    }

    /// Moments with `p = (a + a^+)/sqrt 2`, `x = i(a - a^+)/sqrt 2`, matching
    /// the real `<p|n>` convention used by the quadrature transforms.
    /// Assumes the state is normalized.
    pub fn quadrature_moments(&self) -> QuadratureMoments {
        let c = &self.amplitudes;
        let mut mean_n = 0.0;
        let mut lower1 = Complex64::new(0.0, 0.0); // <a>
        let mut lower2 = Complex64::new(0.0, 0.0); // <a^2>
        for (n, a) in c.iter().enumerate() {
            let nf = n as f64;
            mean_n += nf * a.norm_sqr();
            if n >= 1 {
                lower1 += c[n - 1].conj() * a * nf.sqrt();
            }
            if n >= 2 {
                lower2 += c[n - 2].conj() * a * (nf * (nf - 1.0)).sqrt();
            }
        }
        let mean_p = std::f64::consts::SQRT_2 * lower1.re;
        let mean_x = -std::f64::consts::SQRT_2 * lower1.im;
        let p2 = mean_n + 0.5 + lower2.re;
        let x2 = mean_n + 0.5 - lower2.re;
        QuadratureMoments {
            mean_n,
            mean_x,
            mean_p,
            var_x: x2 - mean_x * mean_x,
            var_p: p2 - mean_p * mean_p,
        }
    }

    pub fn mean_number(&self) -> f64 {
        self.quadrature_moments().mean_n
    }

    /// CSV with header `n,re,im`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,re,im")?;
        for (n, a) in self.amplitudes.iter().enumerate() {
            writeln!(out, "{},{:.16e},{:.16e}", n, a.re, a.im)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == "n,re,im" => {}
            _ => return Err(Error::domain("missing `n,re,im` header")),
        }
        let mut amplitudes = Vec::new();
        for (row, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::domain(format!("row {row}: {e}")))
            };
            if fields.len() != 3 || fields[0].trim().parse::<usize>().ok() != Some(row) {
                return Err(Error::domain(format!("row {row}: malformed `{line}`")));
            }
            amplitudes.push(Complex64::new(parse(fields[1])?, parse(fields[2])?));
        }
        Self::new(amplitudes)
    }
}

/// Smallest even truncation that keeps the squeezed-state tail below
/// `tail_tol` and leaves room for a number measurement centred at `mu_max`
/// with resolution `1/beta`. Uses [`TRUNCATION_CAP`].
pub fn choose_truncation(xi2: f64, beta: f64, mu_max: f64, tail_tol: f64) -> Result<usize> {
    choose_truncation_capped(xi2, beta, mu_max, tail_tol, TRUNCATION_CAP)
}

pub fn choose_truncation_capped(
    xi2: f64,
    beta: f64,
    mu_max: f64,
    tail_tol: f64,
    cap: usize,
) -> Result<usize> {
    if !(xi2 >= 1.0) || !xi2.is_finite() {
        return Err(Error::domain(format!("xi2 = {xi2} must be finite and >= 1")));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!("beta = {beta} must be finite and > 0")));
    }
    if !(mu_max >= 0.0) || !mu_max.is_finite() {
        return Err(Error::domain(format!("mu_max = {mu_max} must be finite and >= 0")));
    }
    if !(tail_tol > 0.0 && tail_tol <= 1e-4) {
        return Err(Error::domain(format!("tail_tol = {tail_tol} must lie in (0, 1e-4]")));
    }

    // Stirling populations fall off as q^k over n = 2k; they bound the exact
    // ones from above, and the normalized tail beyond n = 2K is q^{K+1}.
    let ratio = (xi2 - 1.0) / (xi2 + 1.0);
    let q = ratio * ratio;
    let tail_pairs = if q == 0.0 {
        0
    } else {
        let mut k = ((tail_tol.ln() / q.ln()).ceil() as i64 - 1).max(0) as usize;
        while q.powi(k as i32 + 1) >= tail_tol {
            k += 1;
        }
        k
    };
    let by_tail = 2 * tail_pairs;

    let by_measurement = if mu_max > 0.0 {
        (mu_max + 10.0 / beta).ceil() as usize
    } else {
        0
    };

    let mut n_max = by_tail.max(by_measurement).max(2);
    if n_max % 2 == 1 {
        n_max += 1;
    }
    if n_max > cap {
        return Err(Error::Capacity {
            required: n_max,
            cap,
        });
    }
    Ok(n_max)
}
