//! Experimental parameter chain.
//!
//! From the resonant optical depth, detuning and photon/atom numbers to the
//! dimensionless couplings (`xi2`, `beta`), the depumping probability `eta`,
//! and every constraint a cat-state experiment has to meet, in free space or
//! inside a low-finesse cavity of mirror transmission `T`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Far-detuning regime required by the optics formulas: `|delta| >= 10 gamma`.
pub const MIN_DETUNING_RATIO: f64 = 10.0;
/// Single-pass quantities must stay below `T / 10` for the cavity formulas.
pub const CAVITY_SINGLE_PASS_LIMIT: f64 = 0.1;
/// An unmet depth condition within this fraction of the threshold is "marginal".
pub const MARGINAL_DEPTH_FRACTION: f64 = 0.4;
/// Relative slack on `eta xi2 <= 1`; the optimal operating point of the
/// chain sits exactly on this boundary.
const COHERENCE_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentalParams {
    /// Resonant optical depth.
    pub kappa0: f64,
    pub gamma: f64,
    /// Detuning, in the same units as `gamma`.
    pub delta: f64,
    pub n_atoms: u64,
    pub n_photons: f64,
    /// Cavity mirror transmission; 1 means free space.
    pub transmission: f64,
    /// Spin polarization fraction after optical pumping.
    pub polarization: f64,
    /// Ground-state coherence time in seconds.
    pub tau_c: f64,
}

impl ExperimentalParams {
    /// Every violated constraint, one message each.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        let positive = |name: &str, v: f64, out: &mut Vec<String>| {
            if !(v > 0.0 && v.is_finite()) {
                out.push(format!("{name} = {v} must be finite and > 0"));
            }
        };
        positive("kappa0", self.kappa0, &mut out);
        positive("gamma", self.gamma, &mut out);
        positive("n_photons", self.n_photons, &mut out);
        positive("tau_c", self.tau_c, &mut out);
        if self.n_atoms == 0 {
            out.push("n_atoms must be >= 1".into());
        }
        if !self.delta.is_finite() || self.delta.abs() < MIN_DETUNING_RATIO * self.gamma {
            out.push(format!(
                "|delta| = {} must be at least {MIN_DETUNING_RATIO} gamma = {}",
                self.delta.abs(),
                MIN_DETUNING_RATIO * self.gamma
            ));
        }
        if !(self.transmission > 0.0 && self.transmission <= 1.0) {
            out.push(format!("transmission = {} must lie in (0, 1]", self.transmission));
        }
        if !(self.polarization > 0.0 && self.polarization < 1.0) {
            out.push(format!("polarization = {} must lie in (0, 1)", self.polarization));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Domain(problems.join("; ")))
        }
    }

    /// Dense BEC probed in free space: optical depth 1e4 with 4e5 atoms.
    /// The photon number puts the squeezing at the depth bound.
    pub fn bec_free_space() -> Self {
        ExperimentalParams {
            kappa0: 1e4,
            gamma: 1.0,
            delta: 100.0,
            n_atoms: 400_000,
            n_photons: 3.2e4,
            transmission: 1.0,
            polarization: 0.999,
            tau_c: 0.1,
        }
    }

    /// The same density in a T = 5% cavity with 1e3 atoms (single-pass depth 10).
    /// Detuning is raised to 1e4 linewidths so the single-pass rotation stays
    /// well below T.
    pub fn bec_cavity() -> Self {
        ExperimentalParams {
            kappa0: 10.0,
            gamma: 1.0,
            delta: 1e4,
            n_atoms: 1_000,
            n_photons: 1e8,
            transmission: 0.05,
            polarization: 0.999,
            tau_c: 0.1,
        }
    }
}

/// Geometry of a cylindrical sample; `kappa0 = sigma n l`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleGeometry {
    /// Resonant cross section, cm^2.
    pub cross_section: f64,
    /// Transverse area, cm^2.
    pub area: f64,
    /// Atomic density, cm^-3.
    pub density: f64,
    /// Length along the probe, cm.
    pub length: f64,
}

impl SampleGeometry {
    pub fn new(cross_section: f64, area: f64, density: f64, length: f64) -> Result<Self> {
        for (name, v) in [
            ("cross_section", cross_section),
            ("area", area),
            ("density", density),
            ("length", length),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} = {v} must be finite and > 0")));
            }
        }
        Ok(SampleGeometry {
            cross_section,
            area,
            density,
            length,
        })
    }

    pub fn kappa0(&self) -> f64 {
        self.cross_section * self.density * self.length
    }

    pub fn n_atoms(&self) -> f64 {
        self.density * self.area * self.length
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetunedOptics {
    pub kappa_detuned: f64,
    pub theta_detuned: f64,
}

/// `kappa_delta = kappa0 gamma^2 / (4 delta^2)`, `theta_delta = kappa0 gamma / (2 delta)`.
pub fn detuned_optics(kappa0: f64, gamma: f64, delta: f64) -> Result<DetunedOptics> {
    if !(kappa0 > 0.0) || !(gamma > 0.0) {
        return Err(Error::domain(format!(
            "kappa0 = {kappa0} and gamma = {gamma} must be > 0"
        )));
    }
    if !(delta.abs() >= MIN_DETUNING_RATIO * gamma) {
        return Err(Error::domain(format!(
            "detuning {delta} is not far from resonance (need |delta| >= {})",
            MIN_DETUNING_RATIO * gamma
        )));
    }
    Ok(DetunedOptics {
        kappa_detuned: kappa0 * gamma * gamma / (4.0 * delta * delta),
        theta_detuned: kappa0 * gamma / (2.0 * delta),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    /// Rotation per atom.
    pub a: f64,
    pub xi2: f64,
    pub beta: f64,
    /// Optical depumping probability per atom.
    pub eta: f64,
}

pub fn coupling_chain(
    theta_detuned: f64,
    kappa_detuned: f64,
    n_atoms: f64,
    n_photons: f64,
) -> Result<Coupling> {
    for (name, v) in [
        ("theta_detuned", theta_detuned),
        ("kappa_detuned", kappa_detuned),
        ("n_atoms", n_atoms),
        ("n_photons", n_photons),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::domain(format!("{name} = {v} must be finite and > 0")));
        }
    }
    let a = theta_detuned / n_atoms;
    Ok(Coupling {
        a,
        xi2: a * a * n_atoms * n_photons / 4.0,
        beta: a * (2.0 * n_photons).sqrt(),
        eta: kappa_detuned * n_photons / n_atoms,
    })
}

/// Depth-limited squeezing, `sqrt(kappa0) / 2`.
pub fn max_squeezing_depth(kappa0: f64) -> Result<f64> {
    if !(kappa0 > 0.0) {
        return Err(Error::domain(format!("kappa0 = {kappa0} must be > 0")));
    }
    Ok(kappa0.sqrt() / 2.0)
}

/// `eta <= 1/xi2`.
pub fn coherence_ok(eta: f64, xi2: f64) -> bool {
    eta * xi2 <= 1.0 + COHERENCE_SLACK
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DepthFlag {
    Met,
    Marginal,
    Unmet,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentalCatConditions {
    /// `2 kappa0 / T` in a cavity, `kappa0` in free space.
    pub effective_depth: f64,
    /// `4 N_a^{2/3}`.
    pub depth_threshold: f64,
    pub depth_ok: bool,
    /// `N_a^{1/3}`.
    pub xi2_required: f64,
    pub flag: DepthFlag,
}

pub fn cat_conditions_experimental(
    kappa0: f64,
    n_atoms: f64,
    transmission: f64,
) -> Result<ExperimentalCatConditions> {
    if !(kappa0 > 0.0) || !(n_atoms > 0.0) {
        return Err(Error::domain(format!(
            "kappa0 = {kappa0} and n_atoms = {n_atoms} must be > 0"
        )));
    }
    if !(transmission > 0.0 && transmission <= 1.0) {
        return Err(Error::domain(format!("transmission = {transmission} must lie in (0, 1]")));
    }
    let effective_depth = if transmission < 1.0 {
        2.0 * kappa0 / transmission
    } else {
        kappa0
    };
    // cbrt keeps perfect cubes exact (1e3 -> 10), unlike powf(2/3)
    let root = n_atoms.cbrt();
    let depth_threshold = 4.0 * root * root;
    let depth_ok = effective_depth >= depth_threshold;
    let flag = if depth_ok {
        DepthFlag::Met
    } else if effective_depth >= MARGINAL_DEPTH_FRACTION * depth_threshold {
        DepthFlag::Marginal
    } else {
        DepthFlag::Unmet
    };
    Ok(ExperimentalCatConditions {
        effective_depth,
        depth_threshold,
        depth_ok,
        xi2_required: root,
        flag,
    })
}

/// Low-finesse cavity enhancement of a single-pass quantity, `2 value / T`.
pub fn cavity_enhancement(value: f64, transmission: f64) -> Result<f64> {
    if !(transmission > 0.0 && transmission < 1.0) {
        return Err(Error::domain(format!(
            "cavity transmission {transmission} must lie in (0, 1)"
        )));
    }
    if !(value >= 0.0) || value >= CAVITY_SINGLE_PASS_LIMIT * transmission {
        return Err(Error::domain(format!(
            "single-pass value {value} is not small against transmission {transmission} (limit {})",
            CAVITY_SINGLE_PASS_LIMIT * transmission
        )));
    }
    Ok(2.0 * value / transmission)
}

/// Heuristic squeezing ceiling from imperfect polarization, `1/(1 - p)`.
pub fn polarization_limit(polarization: f64) -> Result<f64> {
    if !(polarization > 0.0 && polarization < 1.0) {
        return Err(Error::domain(format!("polarization = {polarization} must lie in (0, 1)")));
    }
    Ok(1.0 / (1.0 - polarization))
}

/// Required precision of the spin rotation between the two measurements.
pub fn rotation_tolerance(xi2: f64, n_atoms: f64) -> Result<f64> {
    if !(xi2 > 0.0) || !(n_atoms > 0.0) {
        return Err(Error::domain(format!("xi2 = {xi2} and n_atoms = {n_atoms} must be > 0")));
    }
    Ok(1.0 / (xi2 * n_atoms.sqrt()))
}

/// Lifetime of the superposition, that of its squeezed parent: `tau_c / xi2`.
pub fn cat_lifetime(tau_c: f64, xi2: f64) -> Result<f64> {
    if !(tau_c > 0.0) || !(xi2 > 0.0) {
        return Err(Error::domain(format!("tau_c = {tau_c} and xi2 = {xi2} must be > 0")));
    }
    Ok(tau_c / xi2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub inputs: ExperimentalParams,
    pub cavity_applied: bool,
    /// Single-pass detuned optical depth.
    pub kappa_detuned: f64,
    /// Single-pass rotation angle.
    pub theta_detuned: f64,
    /// Values after cavity enhancement (equal to single-pass in free space).
    pub kappa_detuned_effective: f64,
    pub theta_detuned_effective: f64,
    pub effective_depth: f64,
    pub a_per_atom: f64,
    pub xi2_raw: f64,
    /// `min(xi2_raw, xi2_max_depth, xi2_max_polarization)`.
    pub xi2_achieved: f64,
    pub beta: f64,
    pub eta: f64,
    pub xi2_max_depth: f64,
    /// From `1/(1 - polarization)`, a heuristic mapping.
    pub xi2_max_polarization: f64,
    pub xi2_required_cat: f64,
    pub depth_threshold: f64,
    pub depth_condition_met: bool,
    pub depth_flag: DepthFlag,
    pub coherence_ok: bool,
    /// `beta xi2_achieved > 1`.
    pub combined_condition: bool,
    /// `xi2_achieved >= xi2_required_cat`.
    pub squeezing_sufficient: bool,
    pub rotation_tolerance: f64,
    /// Seconds.
    pub cat_lifetime: f64,
}

pub fn evaluate_scenario(params: &ExperimentalParams) -> Result<FeasibilityReport> {
    params.validate().map_err(|e| e.in_stage("parameters"))?;
    let n_atoms = params.n_atoms as f64;

    let optics = detuned_optics(params.kappa0, params.gamma, params.delta)
        .map_err(|e| e.in_stage("detuned_optics"))?;
    let cavity_applied = params.transmission < 1.0;
    let (theta, kappa) = if cavity_applied {
        let enhance = |v| {
            cavity_enhancement(v, params.transmission).map_err(|e| e.in_stage("cavity_enhancement"))
        };
        (enhance(optics.theta_detuned)?, enhance(optics.kappa_detuned)?)
    } else {
        (optics.theta_detuned, optics.kappa_detuned)
    };

    let coupling = coupling_chain(theta, kappa, n_atoms, params.n_photons)
        .map_err(|e| e.in_stage("coupling_chain"))?;
    let conditions = cat_conditions_experimental(params.kappa0, n_atoms, params.transmission)
        .map_err(|e| e.in_stage("cat_conditions"))?;
    let xi2_max_depth =
        max_squeezing_depth(conditions.effective_depth).map_err(|e| e.in_stage("max_squeezing"))?;
    let xi2_max_polarization =
        polarization_limit(params.polarization).map_err(|e| e.in_stage("polarization_limit"))?;
    let xi2_achieved = coupling.xi2.min(xi2_max_depth).min(xi2_max_polarization);

    Ok(FeasibilityReport {
        inputs: *params,
        cavity_applied,
        kappa_detuned: optics.kappa_detuned,
        theta_detuned: optics.theta_detuned,
        kappa_detuned_effective: kappa,
        theta_detuned_effective: theta,
        effective_depth: conditions.effective_depth,
        a_per_atom: coupling.a,
        xi2_raw: coupling.xi2,
        xi2_achieved,
        beta: coupling.beta,
        eta: coupling.eta,
        xi2_max_depth,
        xi2_max_polarization,
        xi2_required_cat: conditions.xi2_required,
        depth_threshold: conditions.depth_threshold,
        depth_condition_met: conditions.depth_ok,
        depth_flag: conditions.flag,
        coherence_ok: coherence_ok(coupling.eta, coupling.xi2),
        combined_condition: coupling.beta * xi2_achieved > 1.0,
        squeezing_sufficient: xi2_achieved >= conditions.xi2_required,
        rotation_tolerance: rotation_tolerance(xi2_achieved, n_atoms)
            .map_err(|e| e.in_stage("rotation_tolerance"))?,
        cat_lifetime: cat_lifetime(params.tau_c, xi2_achieved)
            .map_err(|e| e.in_stage("cat_lifetime"))?,
    })
}
