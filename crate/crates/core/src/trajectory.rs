//! Monte Carlo over both measurement outcomes.
//!
//! Every trajectory draws `p_P` (logged only: recentring makes the squeezed
//! state independent of it) and then `p_R` from the squeezed state. Each
//! trajectory owns the random stream `(seed, index)`, so batches are
//! reproducible regardless of how they are scheduled across threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

use crate::cat::check_cat_conditions;
use crate::error::{Error, Result};
use crate::protocol::{
    mu_of_outcome, outcome_density_second, sample_first_outcome, sample_second_outcome,
    squeezed_state_exact, NumberQndParams, OutcomeDensity, SqueezeParams,
};
use crate::rng::RandomSource;
use crate::state::{choose_truncation, NumberState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub index: u64,
    #[serde(rename = "p_P")]
    pub p_p: f64,
    #[serde(rename = "p_R")]
    pub p_r: f64,
    pub mu_exact: f64,
    pub mu_approx: f64,
    pub resolvable: bool,
    pub reachable: bool,
    pub combined: bool,
}

#[derive(Clone, Debug)]
pub struct TrajectoryRun {
    pub squeeze: SqueezeParams,
    pub beta: f64,
    pub seed: u64,
    pub squeezed: NumberState,
    pub records: Vec<TrajectoryRecord>,
}

impl TrajectoryRun {
    pub fn new(xi2: f64, beta: f64, count: u64, seed: u64, tail_tol: f64) -> Result<Self> {
        let squeeze = SqueezeParams::from_xi2(xi2)?;
        let qnd = NumberQndParams::new(beta)?;
        if xi2 <= 1.0 {
            return Err(Error::domain("trajectories need xi2 > 1"));
        }
        if count == 0 {
            return Err(Error::domain("trajectory count must be >= 1"));
        }
        let n_max = choose_truncation(xi2, beta, 0.0, tail_tol)?;
        let squeezed = squeezed_state_exact(xi2, n_max)?;
        let records = (0..count)
            .into_par_iter()
            .map(|index| {
                let mut rng = RandomSource::for_stream(seed, index);
                let p_p = sample_first_outcome(squeeze.alpha(), &mut rng)?.value;
                let p_r = sample_second_outcome(&squeezed, qnd.beta(), &mut rng)?.value;
                let mu = mu_of_outcome(p_r, beta, xi2)?;
                let flags = check_cat_conditions(mu.exact, beta, xi2)?;
                Ok(TrajectoryRecord {
                    index,
                    p_p,
                    p_r,
                    mu_exact: mu.exact,
                    mu_approx: mu.approx,
                    resolvable: flags.resolvable,
                    reachable: flags.reachable,
                    combined: flags.combined,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TrajectoryRun {
            squeeze,
            beta,
            seed,
            squeezed,
            records,
        })
    }

    pub fn density(&self) -> OutcomeDensity {
        outcome_density_second(&self.squeezed, self.beta)
    }

    /// One JSON object per line.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn outcomes(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.p_r).collect()
    }

    /// `p_R` above which `mu_exact >= 1/beta`.
    pub fn resolvable_threshold(&self) -> f64 {
        let xi2 = self.squeeze.xi2();
        1.0 - (-2.0 / (xi2 + 1.0)).ln_1p() / (2.0 * self.beta)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    /// Probability mass of the bin under the analytic density.
    pub expected_probability: f64,
}

/// Equal-width bins on `[lo, hi)`; samples outside are dropped.
pub fn histogram(samples: &[f64], lo: f64, hi: f64, bins: usize, density: &OutcomeDensity) -> Vec<HistogramBin> {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &s in samples {
        if s >= lo && s < hi {
            let k = (((s - lo) / width) as usize).min(bins - 1);
            counts[k] += 1;
        }
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| {
            let a = lo + k as f64 * width;
            let b = if k + 1 == bins { hi } else { lo + (k + 1) as f64 * width };
            HistogramBin {
                lo: a,
                hi: b,
                count,
                expected_probability: density.cdf(b) - density.cdf(a),
            }
        })
        .collect()
}

pub fn write_histogram_csv<W: Write>(bins: &[HistogramBin], total: u64, mut out: W) -> std::io::Result<()> {
    writeln!(out, "bin_lo,bin_hi,count,empirical_density,analytic_density")?;
    for b in bins {
        let width = b.hi - b.lo;
        writeln!(
            out,
            "{:.16e},{:.16e},{},{:.16e},{:.16e}",
            b.lo,
            b.hi,
            b.count,
            b.count as f64 / (total as f64 * width),
            b.expected_probability / width
        )?;
    }
    Ok(())
}

/// Pearson statistic over bins with expected count >= 5 (sparser bins are
/// pooled with their neighbours).
pub fn chi_square(hist: &[HistogramBin], total: u64) -> (f64, usize) {
    let n = total as f64;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for b in hist {
        obs += b.count as f64;
        exp += b.expected_probability * n;
        if exp >= 5.0 {
            cells.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    // mass outside the histogram range forms one more cell
    let in_range: f64 = hist.iter().map(|b| b.expected_probability).sum();
    let counted: u64 = hist.iter().map(|b| b.count).sum();
    obs += (total - counted) as f64;
    exp += (1.0 - in_range) * n;
    if let Some(last) = cells.last_mut() {
        last.0 += obs;
        last.1 += exp;
    } else {
        cells.push((obs, exp));
    }
    let stat = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    (stat, cells.len().saturating_sub(1))
}
