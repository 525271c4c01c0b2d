//! Command-line front end.
//!
//! Every command validates its whole configuration up front, writes its
//! files atomically into `--out`, and reports a single JSON object on
//! stdout. Exit codes: 0 success, 2 configuration error, 3 numeric or
//! domain error, 4 improbable measurement outcome.

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::cat::{
    approx_p_wavefunction, approx_x_wavefunction, check_cat_conditions, overlap, CatApproxParams,
    CatMetrics,
};
use crate::error::Error;
use crate::feasibility::{evaluate_scenario, ExperimentalParams};
use crate::io::{write_atomic, write_json_atomic};
use crate::protocol::{
    mu_of_outcome, sample_first_outcome, sample_second_outcome,
    squeezed_state_exact, squeezed_state_stirling, CatPreparation, ProtocolTrace, SqueezeParams,
};
use crate::quadrature::{to_quadrature, Basis, QuadratureGrid, QuadratureWavefunction};
use crate::rng::RandomSource;
use crate::state::{choose_truncation, NumberState, DEFAULT_TAIL_TOL};
use crate::trajectory::{chi_square, histogram, write_histogram_csv, TrajectoryRun};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IMPROBABLE: i32 = 4;
const EXIT_IO: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "spincat", version, about = "Two-step QND cat-state preparation: simulation, analysis and feasibility")]
pub struct Cli {
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// JSON file supplying any of the command's flags (flags take precedence).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Squeezed state after the first measurement (exact and Stirling forms).
    Squeeze(SqueezeArgs),
    /// Conditional cat state after the number measurement.
    Cat(CatArgs),
    /// Monte Carlo over both measurement outcomes.
    Trajectories(TrajectoryArgs),
    /// Experimental parameter chain and constraints.
    Feasibility(FeasibilityArgs),
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SqueezeArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub xi2: Option<f64>,
    /// Even truncation; chosen from the tail tolerance when absent.
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "n_max")]
    pub n_max: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "tail_tol")]
    pub tail_tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "grid_half_width")]
    pub grid_half_width: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "grid_points")]
    pub grid_points: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CatArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub xi2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Step-two outcome p_R.
    #[arg(long, allow_negative_numbers = true)]
    pub pr: Option<f64>,
    /// Step-two outcome given as p_R / beta.
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "pr_over_beta")]
    pub pr_over_beta: Option<f64>,
    /// Sample both outcomes instead of fixing p_R (needs --seed).
    #[arg(long, action = ArgAction::SetTrue)]
    #[serde(default)]
    pub sample: bool,
    #[arg(long, allow_negative_numbers = true)]
    pub seed: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "tail_tol")]
    pub tail_tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "grid_half_width")]
    pub grid_half_width: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "grid_points")]
    pub grid_points: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct TrajectoryArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub xi2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub count: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    pub seed: Option<u64>,
    /// Histogram bins for p_R.
    #[arg(long, allow_negative_numbers = true)]
    pub bins: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "tail_tol")]
    pub tail_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    BecFreeSpace,
    BecCavity,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FeasibilityArgs {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "n_atoms")]
    pub n_atoms: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(alias = "n_photons")]
    pub n_photons: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub transmission: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub polarization: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(alias = "tau_c")]
    pub tau_c: Option<f64>,
}

/// Field-wise fallback: values already set win.
trait Merge {
    fn merge(self, fallback: Self) -> Self;
}

macro_rules! merge_options {
    ($ty:ty { $($field:ident),* } $(, flags { $($flag:ident),* })?) => {
        impl Merge for $ty {
            fn merge(self, fallback: Self) -> Self {
                Self {
                    $($field: self.$field.or(fallback.$field),)*
                    $($($flag: self.$flag || fallback.$flag,)*)?
                }
            }
        }
    };
}

merge_options!(SqueezeArgs { xi2, n_max, tail_tol, grid_half_width, grid_points });
merge_options!(CatArgs { xi2, beta, pr, pr_over_beta, seed, tail_tol, grid_half_width, grid_points }, flags { sample });
merge_options!(TrajectoryArgs { xi2, beta, count, seed, bins, tail_tol });
merge_options!(FeasibilityArgs { preset, kappa0, gamma, delta, n_atoms, n_photons, transmission, polarization, tau_c });

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    pub details: Value,
}

impl CliError {
    fn config(problems: Vec<String>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: format!("invalid configuration: {}", problems.join("; ")),
            details: json!({ "problems": problems }),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": self.message, "exit_code": self.code, "details": self.details })
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let (code, details) = match err.root() {
            Error::ImprobableOutcome {
                outcome,
                norm,
                log_density,
            } => (
                EXIT_IMPROBABLE,
                json!({
                    "p_R": outcome,
                    "conditional_norm": norm,
                    "density": log_density.exp(),
                    "log_density": log_density,
                }),
            ),
            Error::Io(_) => (EXIT_IO, Value::Null),
            _ => {
                let stage = match &err {
                    Error::Stage { stage, .. } => json!(stage),
                    _ => Value::Null,
                };
                (EXIT_NUMERIC, json!({ "stage": stage }))
            }
        };
        CliError {
            code,
            message: err.to_string(),
            details,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn load_config<T: for<'de> Deserialize<'de> + Default>(path: Option<&Path>) -> CliResult<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(vec![format!("cannot read {}: {e}", path.display())]))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::config(vec![format!("bad config {}: {e}", path.display())]))
}

/// Runs a parsed invocation and returns the stdout JSON object.
pub fn run(cli: Cli) -> CliResult<Value> {
    let config = cli.config.as_deref();
    let out = cli.out.as_path();
    match cli.command {
        Command::Squeeze(args) => cmd_squeeze(args.merge(load_config(config)?), out),
        Command::Cat(args) => cmd_cat(args.merge(load_config(config)?), out),
        Command::Trajectories(args) => cmd_trajectories(args.merge(load_config(config)?), out),
        Command::Feasibility(args) => cmd_feasibility(args.merge(load_config(config)?), out),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit
/// code and the stdout JSON.
pub fn run_from_args<I, T>(args: I) -> (i32, Value)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return (0, Value::Null);
            }
            let err = CliError::config(vec![e.to_string().trim().to_string()]);
            return (err.code, err.to_json());
        }
    };
    match run(cli) {
        Ok(v) => (0, v),
        Err(e) => {
            log::error!("{}", e.message);
            (e.code, e.to_json())
        }
    }
}

struct Problems(Vec<String>);

impl Problems {
    fn new() -> Self {
        Problems(Vec::new())
    }

    fn require<T: Copy>(&mut self, name: &str, v: Option<T>) -> Option<T> {
        if v.is_none() {
            self.0.push(format!("missing --{name}"));
        }
        v
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.push(msg());
        }
    }

    fn finish(self) -> CliResult<()> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(CliError::config(self.0))
        }
    }
}

fn check_tail_tol(p: &mut Problems, tail_tol: Option<f64>) -> f64 {
    let t = tail_tol.unwrap_or(DEFAULT_TAIL_TOL);
    p.check(t > 0.0 && t <= 1e-4, || format!("tail-tol = {t} must lie in (0, 1e-4]"));
    t
}

fn check_grid(p: &mut Problems, half_width: Option<f64>, points: Option<usize>) {
    if let Some(w) = half_width {
        p.check(w > 0.0 && w.is_finite(), || format!("grid-half-width = {w} must be > 0"));
    }
    if let Some(n) = points {
        p.check(n >= 2, || format!("grid-points = {n} must be >= 2"));
    }
}

/// Override grid, falling back to the policy grid field by field. Without
/// an explicit point count the grid is refined until it resolves `state`.
fn resolve_grid(
    policy: QuadratureGrid,
    half_width: Option<f64>,
    points: Option<usize>,
    state: &NumberState,
) -> crate::error::Result<QuadratureGrid> {
    let grid = QuadratureGrid::symmetric(
        half_width.unwrap_or(policy.max()),
        points.unwrap_or(policy.count()),
    )?;
    match points {
        Some(_) => Ok(grid),
        None => grid.resolving(state),
    }
}

struct Outputs<'a> {
    dir: &'a Path,
    files: BTreeMap<String, String>,
}

impl<'a> Outputs<'a> {
    fn new(dir: &'a Path) -> Self {
        Outputs {
            dir,
            files: BTreeMap::new(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn record(&mut self, key: &str, path: PathBuf) {
        self.files.insert(key.to_string(), path.display().to_string());
    }

    fn number_state(&mut self, key: &str, name: &str, state: &NumberState) -> CliResult<()> {
        let path = write_atomic(&self.path(name), |o| state.write_csv(o))?;
        self.record(key, path);
        Ok(())
    }

    fn wavefunction(&mut self, key: &str, name: &str, wf: &QuadratureWavefunction) -> CliResult<()> {
        let path = write_atomic(&self.path(name), |o| wf.write_csv(o))?;
        self.record(key, path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, key: &str, name: &str, value: &T) -> CliResult<()> {
        let path = write_json_atomic(&self.path(name), value)?;
        self.record(key, path);
        Ok(())
    }
}

#[derive(Serialize)]
struct StateSummary {
    n_max: usize,
    mean_n: f64,
    var_x: f64,
    var_p: f64,
    var_x_grid: f64,
    var_p_grid: f64,
    norm_p_grid: f64,
    norm_x_grid: f64,
}

fn summarize(state: &NumberState, p: &QuadratureWavefunction, x: &QuadratureWavefunction) -> StateSummary {
    let m = state.quadrature_moments();
    StateSummary {
        n_max: state.n_max(),
        mean_n: m.mean_n,
        var_x: m.var_x,
        var_p: m.var_p,
        var_x_grid: x.coordinate_moments().1,
        var_p_grid: p.coordinate_moments().1,
        norm_p_grid: p.norm(),
        norm_x_grid: x.norm(),
    }
}

pub fn cmd_squeeze(args: SqueezeArgs, out: &Path) -> CliResult<Value> {
    let mut p = Problems::new();
    let xi2 = p.require("xi2", args.xi2);
    if let Some(x) = xi2 {
        p.check(x >= 1.0 && x.is_finite(), || format!("xi2 = {x} must be >= 1"));
    }
    if let Some(n) = args.n_max {
        p.check(n >= 2 && n % 2 == 0, || format!("n-max = {n} must be even and >= 2"));
    }
    let tail_tol = check_tail_tol(&mut p, args.tail_tol);
    check_grid(&mut p, args.grid_half_width, args.grid_points);
    p.finish()?;
    let xi2 = xi2.expect("validated");

    let params = SqueezeParams::from_xi2(xi2)?;
    let n_max = match args.n_max {
        Some(n) => n,
        None => choose_truncation(xi2, 1.0, 0.0, tail_tol)?,
    };
    let exact = squeezed_state_exact(xi2, n_max)?;
    let grid = resolve_grid(
        QuadratureGrid::for_squeezed(xi2)?,
        args.grid_half_width,
        args.grid_points,
        &exact,
    )?;

    let mut files = Outputs::new(out);
    let exact_p = to_quadrature(&exact, &grid, Basis::P)?;
    let exact_x = to_quadrature(&exact, &grid, Basis::X)?;
    files.number_state("exact_number", "squeeze_exact_number.csv", &exact)?;
    files.wavefunction("exact_p", "squeeze_exact_p.csv", &exact_p)?;
    files.wavefunction("exact_x", "squeeze_exact_x.csv", &exact_x)?;
    let exact_summary = summarize(&exact, &exact_p, &exact_x);

    let stirling_summary = if xi2 > 1.0 {
        let stirling = squeezed_state_stirling(xi2, n_max)?;
        let sp = to_quadrature(&stirling, &grid, Basis::P)?;
        let sx = to_quadrature(&stirling, &grid, Basis::X)?;
        files.number_state("stirling_number", "squeeze_stirling_number.csv", &stirling)?;
        files.wavefunction("stirling_p", "squeeze_stirling_p.csv", &sp)?;
        files.wavefunction("stirling_x", "squeeze_stirling_x.csv", &sx)?;
        Some(json!({
            "state": summarize(&stirling, &sp, &sx),
            "overlap_with_exact": exact.inner(&stirling).norm(),
        }))
    } else {
        None
    };

    let summary = json!({
        "xi2": xi2,
        "alpha": params.alpha(),
        "n_max": n_max,
        "grid": grid,
        "expected_var_x": 1.0 / (2.0 * xi2),
        "expected_var_p": xi2 / 2.0,
        "expected_mean_n": (xi2 + 1.0 / xi2) / 4.0 - 0.5,
        "exact": exact_summary,
        "stirling": stirling_summary,
    });
    files.json("summary", "squeeze_summary.json", &summary)?;
    Ok(json!({ "command": "squeeze", "files": files.files, "summary": summary }))
}

pub fn cmd_cat(args: CatArgs, out: &Path) -> CliResult<Value> {
    let mut p = Problems::new();
    let xi2 = p.require("xi2", args.xi2);
    let beta = p.require("beta", args.beta);
    if let Some(x) = xi2 {
        p.check(x > 1.0 && x.is_finite(), || format!("xi2 = {x} must be > 1"));
    }
    if let Some(b) = beta {
        p.check(b > 0.0 && b.is_finite(), || format!("beta = {b} must be > 0"));
    }
    let sources = [args.pr.is_some(), args.pr_over_beta.is_some(), args.sample]
        .iter()
        .filter(|s| **s)
        .count();
    p.check(sources == 1, || {
        "give exactly one of --pr, --pr-over-beta or --sample".to_string()
    });
    if args.sample {
        p.check(args.seed.is_some(), || "--sample needs --seed".to_string());
    }
    for v in [args.pr, args.pr_over_beta].into_iter().flatten() {
        p.check(v.is_finite(), || format!("outcome {v} is not finite"));
    }
    let tail_tol = check_tail_tol(&mut p, args.tail_tol);
    check_grid(&mut p, args.grid_half_width, args.grid_points);
    p.finish()?;
    let (xi2, beta) = (xi2.expect("validated"), beta.expect("validated"));
    let squeeze = SqueezeParams::from_xi2(xi2)?;

    let (p_p, p_r) = if args.sample {
        let mut rng = RandomSource::new(args.seed.expect("validated"));
        let p_p = sample_first_outcome(squeeze.alpha(), &mut rng)?.value;
        let n_max = choose_truncation(xi2, beta, 0.0, tail_tol)?;
        let parent = squeezed_state_exact(xi2, n_max)?;
        (Some(p_p), sample_second_outcome(&parent, beta, &mut rng)?.value)
    } else if let Some(pr) = args.pr {
        (None, pr)
    } else {
        (None, args.pr_over_beta.expect("validated") * beta)
    };

    let prep = CatPreparation::new(xi2, beta, p_r, tail_tol)?;
    let mu = mu_of_outcome(p_r, beta, xi2)?;
    let conditions = check_cat_conditions(mu.exact, beta, xi2)?;

    let grid_mu = mu.exact.max(prep.cat.mean_number()).max(0.5);
    let grid = resolve_grid(
        QuadratureGrid::for_cat(grid_mu)?,
        args.grid_half_width,
        args.grid_points,
        &prep.cat,
    )?;
    let exact_p = to_quadrature(&prep.cat, &grid, Basis::P)?;
    let exact_x = to_quadrature(&prep.cat, &grid, Basis::X)?;

    let mut files = Outputs::new(out);
    files.number_state("cat_number", "cat_number.csv", &prep.cat)?;
    files.wavefunction("cat_p", "cat_p.csv", &exact_p)?;
    files.wavefunction("cat_x", "cat_x.csv", &exact_x)?;

    let mut overlap_exact = Value::Null;
    let mut overlap_approx = Value::Null;
    let mut analytic = Value::Null;
    if mu.exact > 0.0 {
        let params = CatApproxParams::new(mu.exact, beta)?;
        let ap = approx_p_wavefunction(&params, &grid)?;
        files.wavefunction("approx_p", "cat_approx_p.csv", &ap)?;
        match approx_x_wavefunction(&params, &grid) {
            Ok(ax) => files.wavefunction("approx_x", "cat_approx_x.csv", &ax)?,
            Err(e) => log::warn!("analytic x form skipped: {e}"),
        }
        overlap_exact = json!(overlap(&exact_p, &ap)?);
        analytic = serde_json::to_value(CatMetrics::analytic(&params, xi2)?).map_err(Error::from)?;
    }
    if mu.approx > 0.0 {
        let params = CatApproxParams::new(mu.approx, beta)?;
        overlap_approx = json!(overlap(&exact_p, &approx_p_wavefunction(&params, &grid)?)?);
    }
    let (measured, measured_error) =
        match CatMetrics::measured(&exact_p, &exact_x, mu.exact, beta, xi2) {
            Ok(m) => (serde_json::to_value(m).map_err(Error::from)?, Value::Null),
            Err(e) => (Value::Null, json!(e.to_string())),
        };

    let metrics = json!({
        "xi2": xi2,
        "beta": beta,
        "p_R": p_r,
        "mu_exact": mu.exact,
        "mu_approx": mu.approx,
        "n_max": prep.n_max,
        "grid": grid,
        "conditions": conditions,
        "overlap_with_approximation": overlap_exact,
        "overlap_with_approximation_mu_approx": overlap_approx,
        "measured": measured,
        "measured_error": measured_error,
        "analytic": analytic,
    });
    files.json("metrics", "cat_metrics.json", &metrics)?;

    let trace = ProtocolTrace {
        seed: args.seed.filter(|_| args.sample),
        xi2,
        alpha: squeeze.alpha(),
        beta,
        p_p,
        p_r,
        mu_exact: Some(mu.exact),
        mu_approx: mu.approx,
        n_max: prep.n_max,
        state_file: Some("cat_number.csv".to_string()),
    };
    files.json("trace", "cat_trace.json", &trace)?;
    Ok(json!({ "command": "cat", "files": files.files, "trace": trace, "metrics": metrics }))
}

pub fn cmd_trajectories(args: TrajectoryArgs, out: &Path) -> CliResult<Value> {
    let mut p = Problems::new();
    let xi2 = p.require("xi2", args.xi2);
    let beta = p.require("beta", args.beta);
    let count = p.require("count", args.count);
    if let Some(x) = xi2 {
        p.check(x > 1.0 && x.is_finite(), || format!("xi2 = {x} must be > 1"));
    }
    if let Some(b) = beta {
        p.check(b > 0.0 && b.is_finite(), || format!("beta = {b} must be > 0"));
    }
    if let Some(c) = count {
        p.check(c >= 1, || "count must be >= 1".to_string());
    }
    let bins = args.bins.unwrap_or(60);
    p.check(bins >= 2, || format!("bins = {bins} must be >= 2"));
    let tail_tol = check_tail_tol(&mut p, args.tail_tol);
    p.finish()?;
    let (xi2, beta, count) = (
        xi2.expect("validated"),
        beta.expect("validated"),
        count.expect("validated"),
    );
    let seed = args.seed.unwrap_or(0);

    let run = TrajectoryRun::new(xi2, beta, count, seed, tail_tol)?;
    let density = run.density();
    let sd = density.variance().sqrt();
    let (lo, hi) = (density.mean() - 6.0 * sd, density.mean() + 6.0 * sd);
    let outcomes = run.outcomes();
    let hist = histogram(&outcomes, lo, hi, bins, &density);

    let mut files = Outputs::new(out);
    let path = write_atomic(&files.path("trajectories.jsonl"), |o| {
        run.write_jsonl(o)
            .map_err(|e| std::io::Error::other(e.to_string()))
    })?;
    files.record("trajectories", path);
    let path = write_atomic(&files.path("pr_histogram.csv"), |o| {
        write_histogram_csv(&hist, count, o)
    })?;
    files.record("histogram", path);

    let (chi2, dof) = chi_square(&hist, count);
    let p_value = ChiSquared::new(dof as f64)
        .map(|d| 1.0 - d.cdf(chi2))
        .unwrap_or(f64::NAN);
    let resolvable = run.records.iter().filter(|r| r.resolvable).count() as f64 / count as f64;
    let summary = json!({
        "count": count,
        "seed": seed,
        "xi2": xi2,
        "beta": beta,
        "n_max": run.squeezed.n_max(),
        "mean_p_R": outcomes.iter().sum::<f64>() / count as f64,
        "analytic_mean_p_R": density.mean(),
        "fraction_resolvable": resolvable,
        "analytic_resolvable_mass": 1.0 - density.cdf(run.resolvable_threshold()),
        "chi2": chi2,
        "chi2_dof": dof,
        "chi2_p_value": p_value,
    });
    Ok(json!({ "command": "trajectories", "files": files.files, "summary": summary }))
}

pub fn cmd_feasibility(args: FeasibilityArgs, out: &Path) -> CliResult<Value> {
    let base = match args.preset {
        Some(Preset::BecFreeSpace) => Some(ExperimentalParams::bec_free_space()),
        Some(Preset::BecCavity) => Some(ExperimentalParams::bec_cavity()),
        None => None,
    };
    let mut p = Problems::new();
    let pick = |p: &mut Problems, name: &str, v: Option<f64>, preset: Option<f64>| {
        p.require(name, v.or(preset)).unwrap_or(f64::NAN)
    };
    let params = ExperimentalParams {
        kappa0: pick(&mut p, "kappa0", args.kappa0, base.map(|b| b.kappa0)),
        gamma: pick(&mut p, "gamma", args.gamma, base.map(|b| b.gamma)),
        delta: pick(&mut p, "delta", args.delta, base.map(|b| b.delta)),
        n_atoms: p
            .require("n-atoms", args.n_atoms.or(base.map(|b| b.n_atoms)))
            .unwrap_or(0),
        n_photons: pick(&mut p, "n-photons", args.n_photons, base.map(|b| b.n_photons)),
        transmission: args.transmission.or(base.map(|b| b.transmission)).unwrap_or(1.0),
        polarization: args.polarization.or(base.map(|b| b.polarization)).unwrap_or(0.99),
        tau_c: args.tau_c.or(base.map(|b| b.tau_c)).unwrap_or(0.1),
    };
    if p.0.is_empty() {
        p.0.extend(params.problems());
    }
    p.finish()?;

    let report = evaluate_scenario(&params)?;
    let mut files = Outputs::new(out);
    let document = json!({ "preset": args.preset, "report": report });
    files.json("report", "feasibility_report.json", &document)?;
    Ok(json!({ "command": "feasibility", "files": files.files, "preset": args.preset, "report": report }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config() {
        let flags = CatArgs {
            xi2: Some(20.0),
            ..Default::default()
        };
        let file: CatArgs =
            serde_json::from_str(r#"{"xi2": 5.0, "beta": 0.5, "pr-over-beta": 7.0}"#).unwrap();
        let merged = flags.merge(file);
        assert_eq!(merged.xi2, Some(20.0));
        assert_eq!(merged.beta, Some(0.5));
        assert_eq!(merged.pr_over_beta, Some(7.0));
    }

    #[test]
    fn config_rejects_unknown_fields() {
        assert!(serde_json::from_str::<SqueezeArgs>(r#"{"xii2": 3}"#).is_err());
        assert!(serde_json::from_str::<SqueezeArgs>(r#"{"n_max": 10}"#).is_ok());
    }

    #[test]
    fn validation_aggregates_problems() {
        let dir = tempfile::tempdir().unwrap();
        let err = cmd_cat(
            CatArgs {
                xi2: Some(0.5),
                beta: Some(-1.0),
                ..Default::default()
            },
            dir.path(),
        )
        .unwrap_err();
        assert_eq!(err.code, EXIT_CONFIG);
        let problems = err.details["problems"].as_array().unwrap();
        assert_eq!(problems.len(), 3, "{problems:?}");
    }
}
