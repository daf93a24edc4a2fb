//! Experiment drivers reproducing the benchmark protocol: data generation,
//! solver fan-out, trace CSVs, `summary.json` and optional plots.
//!
//! Each driver has a structured entry point (`run_sqrt`, `run_karcher`, ...)
//! returning traces and diagnostics in memory — the acceptance suite calls
//! these — plus the file-writing [`run_experiment`] wrapper behind the CLI.

use crate::config::{Conditioning, ExperimentConfig, ExperimentKind, SolverKind};
use crate::datagen::{
    gen_cov_pair, gen_hilbert, gen_samples, gen_wishart_like_with, RngSpec, SampleDist,
};
use crate::plot::write_convergence_plots;
use crate::traces::write_trace_csv;
use nalgebra::DMatrix;
use crate::datagen::standard_normal;
use serde::Serialize;
use spdreg_core::objectives::{
    gaussian_optimistic, kotz_optimistic, mvt_optimistic, spd_regression, sqrt_objective,
    DatasetVectors, DcObjective,
};
use spdreg_core::regularizers::Regularizer;
use spdreg_core::objectives::karcher_objective;
use spdreg_core::solvers::{
    cccp, rcg, rgd, sqrt_fixed_point, CccpConfig, LineSearchConfig, SolverTrace,
};
use spdreg_core::spd::{SpdMatrix, SymMatrix};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Other(#[from] anyhow::Error),
}

fn config_err(msg: impl Into<String>) -> RunError {
    RunError::Config(msg.into())
}

/// Summary sidecar written next to the traces: full config echo, resolved
/// defaults, RNG addressing, solver metadata and per-run diagnostics.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub config: ExperimentConfig,
    pub resolved_defaults: Vec<String>,
    pub rng_streams: Vec<RngSpec>,
    pub init_rule: String,
    pub armijo: ArmijoEcho,
    pub rcg_metadata: RcgEcho,
    pub objective_column: String,
    pub warnings: Vec<String>,
    pub solvers: BTreeMap<String, SolverSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cov_pair_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cond_numbers: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_input: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sqrt_residuals: Option<BTreeMap<String, SqrtResiduals>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_sweep: Option<Vec<BetaRow>>,
}

#[derive(Debug, Serialize)]
pub struct ArmijoEcho {
    pub c1: f64,
    pub shrink: f64,
    pub initial_step: f64,
    pub max_backtracks: usize,
}

impl From<&LineSearchConfig> for ArmijoEcho {
    fn from(ls: &LineSearchConfig) -> Self {
        ArmijoEcho {
            c1: ls.c1,
            shrink: ls.shrink,
            initial_step: ls.initial_step,
            max_backtracks: ls.max_backtracks,
        }
    }
}

/// The conjugate-gradient baseline is underdetermined by its usual citation;
/// the concrete choices are recorded with every run.
#[derive(Debug, Serialize)]
pub struct RcgEcho {
    pub beta_rule: &'static str,
    pub transport: &'static str,
    pub restart: &'static str,
}

impl Default for RcgEcho {
    fn default() -> Self {
        RcgEcho {
            beta_rule: "fletcher-reeves",
            transport: "closed-form E V E^T along geodesics",
            restart: "steepest descent every d iterations or on non-descent",
        }
    }
}

#[derive(Debug, Serialize, Clone)]
pub struct SolverSummary {
    pub iterations: usize,
    pub wall_seconds: f64,
    pub final_objective: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_dist_to_ref: Option<f64>,
    pub stalled: bool,
}

#[derive(Debug, Serialize, Clone)]
pub struct SqrtResiduals {
    /// `|| X^2 - A ||_F`
    pub square_residual: f64,
    /// `|| X^2 - A ||_F / || A ||_F`
    pub square_residual_rel: f64,
    /// `|| X - A^{1/2} ||_F` against the eigendecomposition root
    pub root_distance: f64,
}

#[derive(Debug, Serialize, Clone)]
pub struct BetaRow {
    pub beta: f64,
    pub dist_to_scatter: f64,
    pub dist_to_anchor: f64,
    pub dist_to_truth: f64,
    pub final_objective: f64,
}

fn summary_of(trace: &SolverTrace, stalled: bool) -> SolverSummary {
    let last = trace.last().expect("traces always hold the initial record");
    SolverSummary {
        iterations: last.iter,
        wall_seconds: last.wall_seconds,
        final_objective: last.objective,
        final_dist_to_ref: last.dist_to_ref,
        stalled,
    }
}

/// Run a Riemannian baseline, treating a mid-run line-search stall as a
/// terminated (flagged) run rather than an error.
fn run_baseline(
    kind: SolverKind,
    obj: &DcObjective,
    x0: &SpdMatrix,
    ls: &LineSearchConfig,
    iters: usize,
    grad_tol: f64,
    reference: Option<&SpdMatrix>,
) -> Result<(SpdMatrix, SolverTrace, bool), RunError> {
    let value = |x: &SpdMatrix| obj.value(x);
    let egrad = |x: &SpdMatrix| obj.grad(x);
    let out = match kind {
        SolverKind::Rgd => rgd(&value, &egrad, x0, ls, iters, grad_tol, reference),
        SolverKind::Rcg => rcg(&value, &egrad, x0, ls, iters, grad_tol, reference),
        SolverKind::Cccp => unreachable!("cccp handled by the caller"),
    };
    match out {
        Ok((x, trace)) => Ok((x, trace, false)),
        Err(e) => match e.into_partial() {
            Some((x, trace)) => Ok((x, trace, true)),
            None => Err(RunError::Solver("line search failed on the first step".into())),
        },
    }
}

pub struct SqrtOutcome {
    pub a: SpdMatrix,
    pub ref_root: SpdMatrix,
    pub traces: BTreeMap<String, SolverTrace>,
    pub stalled: BTreeMap<String, bool>,
    pub residuals: BTreeMap<String, SqrtResiduals>,
    pub cond_numbers: Vec<f64>,
    /// Numerical condition number of the input, `lambda_max / max(lambda_min,
    /// eps lambda_max)` — the floor makes the figure meaningful for inputs
    /// that are singular at working precision (the Hilbert matrix).
    pub kappa_input: f64,
}

pub fn run_sqrt(cfg: &ExperimentConfig) -> Result<SqrtOutcome, RunError> {
    let d = cfg.d;
    let a = match cfg.conditioning {
        Conditioning::Medium => {
            let mut rng = RngSpec::new(cfg.seed, 0).rng();
            gen_wishart_like_with(d, &mut rng)
        }
        Conditioning::Hilbert => gen_hilbert(d),
    };
    // clamped eigenvalue root: exact for PD spectra, and still a usable
    // reference when the trailing eigenvalues are numerical noise
    let ref_root = SpdMatrix::assume_spd(a.mat_fn(|l| l.max(0.0).sqrt()));
    let x0 = SpdMatrix::scaled_identity(d, 3.0);
    let kappa_input = a.lambda_max() / a.lambda_min().max(f64::EPSILON * a.lambda_max());

    let baseline_iters = match cfg.conditioning {
        Conditioning::Medium => cfg.max_iters,
        Conditioning::Hilbert => cfg.max_iters.min(400),
    };
    let obj = sqrt_objective(&a);
    let ls = LineSearchConfig::default();

    let mut traces = BTreeMap::new();
    let mut stalled = BTreeMap::new();
    let mut residuals = BTreeMap::new();
    let mut cond_numbers = Vec::new();
    for solver in &cfg.solvers {
        let (solution, trace, did_stall) = match solver {
            SolverKind::Cccp => {
                let run = sqrt_fixed_point(&a, &x0, cfg.max_iters, cfg.tol, Some(&ref_root));
                cond_numbers = run.cond_numbers;
                (run.solution, run.trace, false)
            }
            other => run_baseline(*other, &obj, &x0, &ls, baseline_iters, cfg.grad_tol, Some(&ref_root))?,
        };
        let square = solution.as_matrix() * solution.as_matrix();
        let square_residual = (&square - a.as_matrix()).norm();
        residuals.insert(
            solver.name().to_string(),
            SqrtResiduals {
                square_residual,
                square_residual_rel: square_residual / a.frob_norm(),
                root_distance: (solution.as_matrix() - ref_root.as_matrix()).norm(),
            },
        );
        stalled.insert(solver.name().to_string(), did_stall);
        traces.insert(solver.name().to_string(), trace);
    }
    Ok(SqrtOutcome { a, ref_root, traces, stalled, residuals, cond_numbers, kappa_input })
}

pub struct KarcherOutcome {
    pub data: Vec<SpdMatrix>,
    pub reference: SpdMatrix,
    pub traces: BTreeMap<String, SolverTrace>,
    pub stalled: BTreeMap<String, bool>,
    pub solutions: BTreeMap<String, SpdMatrix>,
}

pub fn run_karcher(cfg: &ExperimentConfig) -> Result<KarcherOutcome, RunError> {
    let (d, m) = (cfg.d, cfg.m);
    let mut rng = RngSpec::new(cfg.seed, 3).rng();
    let data: Vec<SpdMatrix> = (0..m).map(|_| gen_wishart_like_with(d, &mut rng)).collect();
    // arithmetic mean as the shared initializer
    let mut mean = DMatrix::zeros(d, d);
    for a in &data {
        mean += a.as_matrix();
    }
    mean /= m as f64;
    let x0 = SpdMatrix::new(SymMatrix::new(mean)).map_err(|e| config_err(e.to_string()))?;

    // One fixed-point pass doubles as the CCCP run and the reference
    // producer: iterates are captured, the endpoint becomes the reference,
    // and the distance column is filled in retroactively. The map kernel is
    // the shared CCCP oracle, so this is exactly the cccp trajectory.
    let weights = vec![1.0 / m as f64; m];
    let const_term: f64 =
        -0.5 * data.iter().map(|a| a.log_det()).sum::<f64>() / m as f64;
    let clock = std::time::Instant::now();
    let mut cccp_trace = SolverTrace::default();
    let mut iterates = vec![x0.clone()];
    let mut x = x0.clone();
    let mut x_ld: f64 = x.eigenvalues().iter().map(|l| l.ln()).sum();
    for k in 0..=cfg.max_iters {
        let wall = clock.elapsed().as_secs_f64();
        let step = spdreg_core::objectives::karcher_map_step(&x, &data, &weights);
        cccp_trace.push(spdreg_core::solvers::TraceRecord {
            iter: k,
            wall_seconds: wall,
            objective: -0.5 * x_ld + const_term + step.mid_log_det,
            dist_to_ref: None,
            grad_norm: None,
        });
        if k == cfg.max_iters {
            break;
        }
        let rel_change =
            (step.next.as_matrix() - x.as_matrix()).norm() / x.frob_norm().max(1e-300);
        x = step.next;
        x_ld = step.next_log_det;
        iterates.push(x.clone());
        if rel_change < cfg.tol {
            let wall = clock.elapsed().as_secs_f64();
            let fin = spdreg_core::objectives::karcher_map_step(&x, &data, &weights);
            cccp_trace.push(spdreg_core::solvers::TraceRecord {
                iter: k + 1,
                wall_seconds: wall,
                objective: -0.5 * x_ld + const_term + fin.mid_log_det,
                dist_to_ref: None,
                grad_norm: None,
            });
            break;
        }
    }
    let reference = iterates.last().expect("at least the initial point").clone();
    for (rec, xk) in cccp_trace.records.iter_mut().zip(&iterates) {
        rec.dist_to_ref = Some((xk.as_matrix() - reference.as_matrix()).norm());
    }
    let cccp_solution = reference.clone();
    drop(iterates);

    let obj = karcher_objective(&data, None).map_err(|e| RunError::Solver(e.to_string()))?;
    let ls = LineSearchConfig::default();
    // run baselines to the matched tolerance: stop once safely inside the
    // agreement ball around the reference
    let stop_dist = 0.5e-6 * reference.frob_norm();
    let mut traces = BTreeMap::new();
    let mut stalled = BTreeMap::new();
    let mut solutions = BTreeMap::new();
    for solver in &cfg.solvers {
        let (solution, trace, did_stall) = match solver {
            SolverKind::Cccp => (cccp_solution.clone(), cccp_trace.clone(), false),
            other => {
                let value = |y: &SpdMatrix| obj.value(y);
                let egrad = |y: &SpdMatrix| obj.grad(y);
                let stop = |y: &SpdMatrix| {
                    (y.as_matrix() - reference.as_matrix()).norm() <= stop_dist
                };
                let out = match other {
                    SolverKind::Rgd => spdreg_core::solvers::rgd_with_stop(
                        &value,
                        &egrad,
                        &x0,
                        &ls,
                        cfg.max_iters,
                        cfg.grad_tol,
                        Some(&reference),
                        Some(&stop),
                    ),
                    SolverKind::Rcg => spdreg_core::solvers::rcg_with_stop(
                        &value,
                        &egrad,
                        &x0,
                        &ls,
                        cfg.max_iters,
                        cfg.grad_tol,
                        Some(&reference),
                        Some(&stop),
                    ),
                    SolverKind::Cccp => unreachable!(),
                };
                match out {
                    Ok((x, t)) => (x, t, false),
                    Err(e) => match e.into_partial() {
                        Some((x, t)) => (x, t, true),
                        None => {
                            return Err(RunError::Solver(
                                "line search failed on the first step".into(),
                            ))
                        }
                    },
                }
            }
        };
        traces.insert(solver.name().to_string(), trace);
        stalled.insert(solver.name().to_string(), did_stall);
        solutions.insert(solver.name().to_string(), solution);
    }
    Ok(KarcherOutcome { data, reference, traces, stalled, solutions })
}

pub struct MleOutcome {
    pub sigma_true: SpdMatrix,
    pub sigma_hat: SpdMatrix,
    pub scatter: SymMatrix,
    /// Keyed by `(beta, solver)` as `beta<value>_<solver>`.
    pub traces: BTreeMap<String, SolverTrace>,
    pub beta_rows: Vec<BetaRow>,
    pub warnings: Vec<String>,
    pub solutions: BTreeMap<String, SpdMatrix>,
    pub cov_pair_delta: f64,
}

fn beta_key(beta: f64, solver: &str) -> String {
    format!("beta{beta}_{solver}")
}

/// Shared driver for the likelihood experiments; `build` maps
/// `(data, anchor, weight)` to the DC objective.
fn run_mle(
    cfg: &ExperimentConfig,
    dist: &SampleDist,
    build: impl Fn(&DatasetVectors, &SpdMatrix, f64) -> Result<DcObjective, RunError>,
) -> Result<MleOutcome, RunError> {
    let d = cfg.d;
    let delta = d as f64; // keeps the symmetrized Gaussian draw PD with huge margin
    let (sigma_true, sigma_hat) =
        gen_cov_pair(d, delta, cfg.seed).map_err(|e| config_err(e.to_string()))?;
    let mut data = gen_samples(dist, &sigma_true, cfg.n, cfg.seed);
    if cfg.center {
        data = data.centered();
    }
    let mut warnings = Vec::new();
    if matches!(dist, SampleDist::Mvt { .. }) && cfg.n <= 50 * d {
        warnings.push(format!(
            "low-sample regime: n = {} <= 50 d = {}; the beta-monotonicity of the optimistic \
             likelihood is unreliable here",
            cfg.n,
            50 * d
        ));
    }
    let scatter = data.scatter();
    // large-n likelihood evaluations are expensive; trade inner precision
    // for outer progress there
    let (inner_iters, inner_tol) = if cfg.n > 500 { (30, 1e-5) } else { (50, 1e-6) };
    let cccp_cfg = CccpConfig {
        outer_iters: cfg.max_iters,
        outer_tol: cfg.tol.max(1e-12),
        inner_iters,
        inner_tol,
        ..CccpConfig::default()
    };
    let ls = LineSearchConfig::default();

    let mut traces = BTreeMap::new();
    let mut beta_rows = Vec::new();
    let mut solutions = BTreeMap::new();
    for &beta in &cfg.betas {
        let obj = build(&data, &sigma_hat, beta)?;
        let mut final_solution: Option<SpdMatrix> = None;
        for solver in &cfg.solvers {
            let (solution, trace) = match solver {
                SolverKind::Cccp => cccp(&obj, &sigma_hat, &cccp_cfg, Some(&sigma_true))
                    .map_err(|e| RunError::Solver(e.to_string()))?,
                other => {
                    let (x, t, _) = run_baseline(
                        *other,
                        &obj,
                        &sigma_hat,
                        &ls,
                        cfg.max_iters,
                        cfg.grad_tol,
                        Some(&sigma_true),
                    )?;
                    (x, t)
                }
            };
            if *solver == SolverKind::Cccp || final_solution.is_none() {
                final_solution = Some(solution.clone());
            }
            traces.insert(beta_key(beta, solver.name()), trace);
            solutions.insert(beta_key(beta, solver.name()), solution);
        }
        let sol = final_solution.expect("at least one solver ran");
        beta_rows.push(BetaRow {
            beta,
            dist_to_scatter: (sol.as_matrix() - scatter.as_matrix()).norm(),
            dist_to_anchor: (sol.as_matrix() - sigma_hat.as_matrix()).norm(),
            dist_to_truth: (sol.as_matrix() - sigma_true.as_matrix()).norm(),
            final_objective: traces[&beta_key(beta, "cccp")].final_objective(),
        });
    }
    Ok(MleOutcome {
        sigma_true,
        sigma_hat,
        scatter,
        traces,
        beta_rows,
        warnings,
        solutions,
        cov_pair_delta: delta,
    })
}

pub fn run_gauss_mle(cfg: &ExperimentConfig) -> Result<MleOutcome, RunError> {
    run_mle(cfg, &SampleDist::Gauss, |data, anchor, beta| {
        gaussian_optimistic(data, anchor, beta).map_err(|e| config_err(e.to_string()))
    })
}

pub fn run_mvt_mle(cfg: &ExperimentConfig) -> Result<MleOutcome, RunError> {
    let nu = cfg.nu;
    run_mle(cfg, &SampleDist::Mvt { nu }, move |data, anchor, gamma| {
        mvt_optimistic(data, nu, anchor, gamma).map_err(|e| config_err(e.to_string()))
    })
}

pub fn run_kotz_mle(cfg: &ExperimentConfig) -> Result<MleOutcome, RunError> {
    let (alpha, b, shape) = (cfg.alpha, cfg.b, cfg.shape);
    run_mle(cfg, &SampleDist::Gauss, move |data, anchor, gamma| {
        kotz_optimistic(data, alpha, b, shape, anchor, gamma).map_err(|e| config_err(e.to_string()))
    })
}

pub struct RegressionOutcome {
    pub w_true: SpdMatrix,
    pub traces: BTreeMap<String, SolverTrace>,
    pub solutions: BTreeMap<String, SpdMatrix>,
}

pub fn run_regression(cfg: &ExperimentConfig) -> Result<RegressionOutcome, RunError> {
    let d = cfg.d;
    let mut rng = RngSpec::new(cfg.seed, 4).rng();
    let g = DMatrix::from_fn(d, d, |_, _| standard_normal(&mut rng));
    let w_true = SpdMatrix::new(SymMatrix::new(
        &g * g.transpose() / d as f64 + DMatrix::identity(d, d),
    ))
    .map_err(|e| config_err(e.to_string()))?;
    let xs: Vec<DMatrix<f64>> = (0..cfg.n)
        .map(|_| DMatrix::from_fn(d, d, |_, _| standard_normal(&mut rng)))
        .collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|x| w_true.sym().dot(&SymMatrix::new(x.clone())))
        .collect();
    let beta = cfg.betas.first().copied().unwrap_or(1.0);
    let reg = Regularizer::SDivBall { anchor: w_true.clone(), beta };
    let obj = spd_regression(&xs, &ys, &reg).map_err(|e| config_err(e.to_string()))?;

    let cccp_cfg = CccpConfig {
        outer_iters: cfg.max_iters,
        outer_tol: cfg.tol.max(1e-12),
        ..CccpConfig::default()
    };
    let ls = LineSearchConfig::default();
    let x0 = SpdMatrix::identity(d);
    let mut traces = BTreeMap::new();
    let mut solutions = BTreeMap::new();
    for solver in &cfg.solvers {
        let (solution, trace) = match solver {
            SolverKind::Cccp => cccp(&obj, &x0, &cccp_cfg, Some(&w_true))
                .map_err(|e| RunError::Solver(e.to_string()))?,
            other => {
                let (x, t, _) =
                    run_baseline(*other, &obj, &x0, &ls, cfg.max_iters, cfg.grad_tol, Some(&w_true))?;
                (x, t)
            }
        };
        traces.insert(solver.name().to_string(), trace);
        solutions.insert(solver.name().to_string(), solution);
    }
    Ok(RegressionOutcome { w_true, traces, solutions })
}

/// Whether the experiment reports likelihood-style objectives, whose absolute
/// level is meaningless (constants dropped): traces then carry
/// `phi - phi_best`.
fn shifts_objective(kind: ExperimentKind) -> bool {
    matches!(
        kind,
        ExperimentKind::GaussMle | ExperimentKind::MvtMle | ExperimentKind::KotzMle
    )
}

/// Run the configured experiment, writing per-solver CSV traces
/// (`<experiment>_<solver>.csv`, with a `beta<value>_` infix for sweeps),
/// `summary.json`, and optional SVG plots into `cfg.out`. Partial outputs are
/// preserved on solver failure.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(), RunError> {
    let mut cfg = cfg.clone();
    let resolved = cfg.resolve_defaults();
    validate(&cfg)?;
    std::fs::create_dir_all(&cfg.out)?;
    let exp = cfg.experiment.name();

    let mut summary = Summary {
        config: cfg.clone(),
        resolved_defaults: resolved,
        rng_streams: vec![
            RngSpec::new(cfg.seed, 0),
            RngSpec::new(cfg.seed, 1),
            RngSpec::new(cfg.seed, 2),
            RngSpec::new(cfg.seed, 3),
            RngSpec::new(cfg.seed, 4),
        ],
        init_rule: match cfg.experiment {
            ExperimentKind::Sqrt => "X0 = 3 I".into(),
            ExperimentKind::Karcher => "X0 = arithmetic mean of the data".into(),
            ExperimentKind::Regression => "W0 = I".into(),
            _ => "Sigma0 = anchor estimate".into(),
        },
        armijo: (&LineSearchConfig::default()).into(),
        rcg_metadata: RcgEcho::default(),
        objective_column: if shifts_objective(cfg.experiment) {
            "phi - phi_best (likelihood constants dropped)".into()
        } else {
            "phi".into()
        },
        warnings: Vec::new(),
        solvers: BTreeMap::new(),
        cov_pair_delta: None,
        reference_norm: None,
        cond_numbers: None,
        kappa_input: None,
        sqrt_residuals: None,
        beta_sweep: None,
    };

    let result = dispatch(&cfg, exp, &mut summary);
    // partial outputs (traces already written) survive an error; the summary
    // is written in both cases
    let summary_path = cfg.out.join("summary.json");
    if let Err(e) = &result {
        summary.warnings.push(format!("run aborted: {e}"));
    }
    std::fs::write(&summary_path, serde_json::to_string_pretty(&summary).map_err(anyhow::Error::from)?)?;
    result
}

fn validate(cfg: &ExperimentConfig) -> Result<(), RunError> {
    if cfg.d == 0 && cfg.experiment != ExperimentKind::Gcheck {
        return Err(config_err("dimension d must be positive"));
    }
    if cfg.solvers.is_empty() {
        return Err(config_err("at least one solver must be selected"));
    }
    if matches!(cfg.experiment, ExperimentKind::Karcher) && cfg.m == 0 {
        return Err(config_err("karcher needs m >= 1"));
    }
    if matches!(
        cfg.experiment,
        ExperimentKind::GaussMle | ExperimentKind::MvtMle | ExperimentKind::KotzMle
    ) && cfg.n == 0
    {
        return Err(config_err("likelihood experiments need n >= 1"));
    }
    Ok(())
}

fn dispatch(cfg: &ExperimentConfig, exp: &str, summary: &mut Summary) -> Result<(), RunError> {
    let out = &cfg.out;
    match cfg.experiment {
        ExperimentKind::Sqrt => {
            let outcome = run_sqrt(cfg)?;
            let mut plot_series = Vec::new();
            for (name, trace) in &outcome.traces {
                write_trace_csv(&out.join(format!("{exp}_{name}.csv")), trace, 0.0)?;
                summary
                    .solvers
                    .insert(name.clone(), summary_of(trace, outcome.stalled[name]));
                plot_series.push((name.clone(), trace));
            }
            summary.cond_numbers = Some(outcome.cond_numbers.clone());
            summary.kappa_input = Some(outcome.kappa_input);
            summary.sqrt_residuals = Some(outcome.residuals.clone());
            if cfg.plot {
                write_convergence_plots(out, exp, &plot_series, 0.0)?;
            }
        }
        ExperimentKind::Karcher => {
            let outcome = run_karcher(cfg)?;
            summary.reference_norm = Some(outcome.reference.frob_norm());
            let ref_obj = karcher_objective(&outcome.data, None)
                .map_err(|e| RunError::Solver(e.to_string()))?
                .value(&outcome.reference);
            let mut plot_series = Vec::new();
            for (name, trace) in &outcome.traces {
                write_trace_csv(&out.join(format!("{exp}_{name}.csv")), trace, 0.0)?;
                let s = summary_of(trace, outcome.stalled[name]);
                if s.final_objective < ref_obj - 1e-9 {
                    summary.warnings.push(format!(
                        "solver {name} ended below the fixed-point reference objective"
                    ));
                }
                summary.solvers.insert(name.clone(), s);
                plot_series.push((name.clone(), trace));
            }
            if cfg.plot {
                write_convergence_plots(out, exp, &plot_series, 0.0)?;
            }
        }
        ExperimentKind::GaussMle | ExperimentKind::MvtMle | ExperimentKind::KotzMle => {
            let outcome = match cfg.experiment {
                ExperimentKind::GaussMle => run_gauss_mle(cfg)?,
                ExperimentKind::MvtMle => run_mvt_mle(cfg)?,
                _ => run_kotz_mle(cfg)?,
            };
            summary.warnings.extend(outcome.warnings.clone());
            summary.cov_pair_delta = Some(outcome.cov_pair_delta);
            let mut plot_series = Vec::new();
            for (key, trace) in &outcome.traces {
                let shift = trace.objectives().fold(f64::INFINITY, f64::min);
                write_trace_csv(&out.join(format!("{exp}_{key}.csv")), trace, shift)?;
                summary.solvers.insert(key.clone(), summary_of(trace, false));
                plot_series.push((key.clone(), trace));
            }
            summary.beta_sweep = Some(outcome.beta_rows.clone());
            if cfg.plot {
                let series: Vec<(String, &SolverTrace)> =
                    plot_series.iter().map(|(k, t)| (k.clone(), *t)).collect();
                write_convergence_plots(out, exp, &series, 0.0)?;
            }
        }
        ExperimentKind::Regression => {
            let outcome = run_regression(cfg)?;
            let mut plot_series = Vec::new();
            for (name, trace) in &outcome.traces {
                write_trace_csv(&out.join(format!("{exp}_{name}.csv")), trace, 0.0)?;
                summary.solvers.insert(name.clone(), summary_of(trace, false));
                plot_series.push((name.clone(), trace));
            }
            if cfg.plot {
                write_convergence_plots(out, exp, &plot_series, 0.0)?;
            }
        }
        ExperimentKind::Gcheck => {
            return Err(config_err(
                "the gcheck experiment is driven by `spdreg gcheck certify FILE.expr`",
            ));
        }
    }
    Ok(())
}

/// Certify an expression file: parse, validate at dimension `d`, certify,
/// optionally audit; human-readable report to stdout.
pub fn run_gcheck_certify(path: &Path, d: usize, audit_trials: usize) -> Result<String, RunError> {
    let text = std::fs::read_to_string(path)?;
    let expr =
        spdreg_core::gcheck::parse_expr(&text).map_err(|e| config_err(e.to_string()))?;
    expr.validate(d).map_err(|e| config_err(e.to_string()))?;
    let cert = spdreg_core::gcheck::certify(&expr);
    let mut report = String::new();
    report.push_str(&format!("verdict: {}\n", cert.verdict.describe()));
    report.push_str("proof trace:\n");
    for line in &cert.proof {
        report.push_str(&format!("  {line}\n"));
    }
    if audit_trials > 0 {
        let audit = spdreg_core::gcheck::numeric_audit(&expr, &cert.verdict, audit_trials, d, 0xA0D17);
        if audit.passed {
            report.push_str(&format!("numeric audit: passed {audit_trials} trials at d = {d}\n"));
        } else {
            report.push_str(&format!(
                "numeric audit: FAILED ({} counterexamples):\n",
                audit.failures.len()
            ));
            for f in &audit.failures {
                report.push_str(&format!("  {f}\n"));
            }
        }
    }
    Ok(report)
}
