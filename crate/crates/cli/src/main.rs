use clap::{Args, Parser, Subcommand};
use spdreg::config::{Conditioning, ExperimentConfig, ExperimentKind, SolverKind};
use spdreg::experiments::{run_experiment, run_gcheck_certify, RunError};
use std::path::PathBuf;
use std::process::ExitCode;

/// Benchmark CLI for constrained optimization on the SPD manifold via
/// structured regularization.
#[derive(Parser)]
#[command(name = "spdreg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Matrix square root via the S-divergence fixed point vs Riemannian baselines.
    Sqrt(ExperimentArgs),
    /// Karcher (S-divergence) barycenter of m SPD matrices.
    Karcher(ExperimentArgs),
    /// Optimistic Gaussian likelihood with an S-divergence ball.
    #[command(name = "gauss-mle")]
    GaussMle(ExperimentArgs),
    /// Optimistic multivariate-t likelihood.
    #[command(name = "mvt-mle")]
    MvtMle(ExperimentArgs),
    /// Optimistic Kotz-type likelihood.
    #[command(name = "kotz-mle")]
    KotzMle(ExperimentArgs),
    /// Least squares on the SPD cone with a DC regularizer.
    Regression(ExperimentArgs),
    /// Certify geodesic convexity / DC structure of an expression file.
    Gcheck {
        #[command(subcommand)]
        action: GcheckAction,
    },
}

#[derive(Subcommand)]
enum GcheckAction {
    /// Parse and certify FILE.expr, printing the verdict and proof trace.
    Certify {
        file: PathBuf,
        /// Ambient dimension the expression is validated at.
        #[arg(long, default_value_t = 4)]
        d: usize,
        /// Randomized falsification trials (0 disables the audit).
        #[arg(long, default_value_t = 500)]
        audit: usize,
    },
}

#[derive(Args, Clone)]
struct ExperimentArgs {
    /// JSON config mirroring the experiment configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Matrix dimension.
    #[arg(long)]
    d: Option<usize>,
    /// Sample count (likelihoods) / design count (regression).
    #[arg(long)]
    n: Option<usize>,
    /// Number of data matrices (karcher).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Regularization weights; repeat for a sweep (beta, or gamma for
    /// mvt/kotz).
    #[arg(long = "beta")]
    betas: Vec<f64>,
    /// Comma-separated subset of cccp,rgd,rcg.
    #[arg(long, value_delimiter = ',')]
    solvers: Vec<SolverKind>,
    #[arg(long, value_enum)]
    conditioning: Option<Conditioning>,
    /// Multivariate-t degrees of freedom.
    #[arg(long)]
    nu: Option<f64>,
    /// Kotz exponent parameter alpha in (0, d/2].
    #[arg(long)]
    alpha: Option<f64>,
    /// Kotz scale parameter b.
    #[arg(long)]
    b: Option<f64>,
    /// Kotz shape parameter.
    #[arg(long = "beta-shape")]
    shape: Option<f64>,
    /// Mean-subtract samples before the scatter matrix.
    #[arg(long)]
    center: bool,
    /// Write static SVG plots next to the traces.
    #[arg(long)]
    plot: bool,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Outer iteration cap.
    #[arg(long)]
    max_iters: Option<usize>,
    /// Fixed-point / CCCP relative-change tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Riemannian gradient-norm tolerance for the baselines.
    #[arg(long)]
    grad_tol: Option<f64>,
}

impl ExperimentArgs {
    fn into_config(self, kind: ExperimentKind) -> Result<ExperimentConfig, RunError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let mut cfg = ExperimentConfig::load_json(path)
                    .map_err(|e| RunError::Config(format!("config file: {e}")))?;
                cfg.experiment = kind;
                cfg
            }
            None => ExperimentConfig::new(kind),
        };
        if let Some(d) = self.d {
            cfg.d = d;
        }
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(m) = self.m {
            cfg.m = m;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if !self.betas.is_empty() {
            cfg.betas = self.betas.clone();
        }
        if !self.solvers.is_empty() {
            cfg.solvers = self.solvers.clone();
        }
        if let Some(c) = self.conditioning {
            cfg.conditioning = c;
        }
        if let Some(nu) = self.nu {
            cfg.nu = nu;
        }
        if let Some(alpha) = self.alpha {
            cfg.alpha = alpha;
        }
        if let Some(b) = self.b {
            cfg.b = b;
        }
        if let Some(shape) = self.shape {
            cfg.shape = shape;
        }
        if self.center {
            cfg.center = true;
        }
        if self.plot {
            cfg.plot = true;
        }
        if let Some(out) = self.out {
            cfg.out = out;
        }
        if let Some(v) = self.max_iters {
            cfg.max_iters = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if let Some(v) = self.grad_tol {
            cfg.grad_tol = v;
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Sqrt(args) => run_experiment(&args.into_config(ExperimentKind::Sqrt)?),
        Command::Karcher(args) => run_experiment(&args.into_config(ExperimentKind::Karcher)?),
        Command::GaussMle(args) => run_experiment(&args.into_config(ExperimentKind::GaussMle)?),
        Command::MvtMle(args) => run_experiment(&args.into_config(ExperimentKind::MvtMle)?),
        Command::KotzMle(args) => run_experiment(&args.into_config(ExperimentKind::KotzMle)?),
        Command::Regression(args) => run_experiment(&args.into_config(ExperimentKind::Regression)?),
        Command::Gcheck { action } => match action {
            GcheckAction::Certify { file, d, audit } => {
                let report = run_gcheck_certify(&file, d, audit)?;
                print!("{report}");
                Ok(())
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Solver(msg)) => {
            eprintln!("solver failure: {msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
