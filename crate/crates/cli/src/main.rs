//! `ridgeproj` command-line tool.
//!
//! Exit codes: 0 on success, 1 for usage or input errors, 2 when a solver
//! fails numerically (non-convergence, exhausted error budget).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ridgeproj::experiment::STATS_SEED;
use ridgeproj::io::{
    load_matrix, load_vector, save_csv, save_matrix_market, save_table, save_vector, with_suffix,
};
use ridgeproj::poly::{compressed_sign_poly, p_k_eval, sign_error_bound, CompressionPlan};
use ridgeproj::synth::{generate, SynthConfig, DEFAULT_NOISE};
use ridgeproj::{
    pc_proj, pc_regress, run_convergence_on, DesignMatrix, Error, MatrixStats, PcrConfig,
    ProjectionConfig, TraceAlgorithm,
};

#[derive(Parser)]
#[command(
    name = "ridgeproj",
    version,
    about = "Principal component projection and regression via ridge solves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic problem with a spectral gap around λ = 0.5.
    ///
    /// Writes PREFIX_A.mtx, PREFIX_b.csv and PREFIX_xtrue.csv. Squared
    /// singular values are split into [0.5(1+γ), 1] (top RANK) and
    /// [0, 0.5(1−γ)]; pass γ/(4(1+γ)) as --gamma to the solvers.
    Synth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Number of components above the gap.
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_prefix: String,
        /// ‖noise‖ / ‖A·x_true‖.
        #[arg(long, default_value_t = DEFAULT_NOISE)]
        noise: f64,
    },
    /// Project a vector onto the principal components with σ² ≥ λ.
    ///
    /// A vector of length n (the number of rows, when different from d) is
    /// mapped through Aᵀ first.
    Project {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        vector: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Outer iterations; defaults to ⌈(2γ)⁻²·ln(2/ε)⌉.
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Principal component regression of a right-hand side.
    Pcr {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Error after every iteration against an exact factorization, as CSV.
    Convergence {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        eps: f64,
        /// Outer iterations (project) or series steps (pcr).
        #[arg(long)]
        max_iters: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate the sign polynomials on a grid.
    ///
    /// pk: x,p_k on [−1, 1]. bound: x,p_k,bound on (0, 1] with the bound
    /// (x√k)⁻¹e^(−kx²). chebyshev: x,compressed,uncompressed on [−1, 1] for
    /// the degree-reduced polynomial at --alpha/--eps.
    Poly {
        #[arg(long, value_enum)]
        kind: PolyKind,
        /// Number of terms; needed for pk and bound.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(clap::Args)]
struct SolverArgs {
    #[arg(long)]
    lambda: f64,
    /// Gap parameter handed to the solver.
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Project,
    Pcr,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyKind {
    Pk,
    Bound,
    Chebyshev,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}

fn stats_for(a: &DesignMatrix, lambda: f64) -> ridgeproj::Result<MatrixStats> {
    MatrixStats::new(a, lambda, STATS_SEED)
}

fn run(command: Command) -> ridgeproj::Result<()> {
    match command {
        Command::Synth {
            n,
            d,
            rank,
            gamma,
            seed,
            out_prefix,
            noise,
        } => {
            let p = generate(&SynthConfig {
                noise,
                ..SynthConfig::new(n, d, rank, gamma, seed)
            })?;
            save_matrix_market(&p.a, with_suffix(&out_prefix, "_A.mtx"))?;
            save_vector(&p.b, with_suffix(&out_prefix, "_b.csv"))?;
            save_vector(&p.x_true, with_suffix(&out_prefix, "_xtrue.csv"))?;
        }
        Command::Project {
            matrix,
            vector,
            solver,
            q,
            out,
        } => {
            let a = load_matrix(&matrix)?;
            let mut y = load_vector(&vector)?;
            if y.len() == a.n_rows() && y.len() != a.n_cols() {
                y = a.matvec_t(&y)?;
            }
            let cfg = ProjectionConfig {
                delta: solver.delta,
                q_override: q,
                ..ProjectionConfig::new(solver.lambda, solver.gamma, solver.eps)
            };
            cfg.validate()?;
            let s = pc_proj(&a, &cfg, &y, &stats_for(&a, solver.lambda)?)?;
            save_vector(&s, &out)?;
        }
        Command::Pcr {
            matrix,
            rhs,
            solver,
            out,
        } => {
            let a = load_matrix(&matrix)?;
            let b = load_vector(&rhs)?;
            let cfg = PcrConfig {
                delta: solver.delta,
                ..PcrConfig::new(solver.lambda, solver.gamma, solver.eps)
            };
            cfg.validate()?;
            let s = pc_regress(&a, &cfg, &b, &stats_for(&a, solver.lambda)?)?;
            save_vector(&s, &out)?;
        }
        Command::Convergence {
            algo,
            matrix,
            rhs,
            lambda,
            gamma,
            eps,
            max_iters,
            out,
        } => {
            let a = load_matrix(&matrix)?;
            let b = load_vector(&rhs)?;
            let algo = match algo {
                Algo::Project => TraceAlgorithm::Projection,
                Algo::Pcr => TraceAlgorithm::Regression,
            };
            let trace = run_convergence_on(&a, &b, lambda, gamma, algo, eps, max_iters)?;
            save_csv(&trace, &out)?;
        }
        Command::Poly {
            kind,
            k,
            alpha,
            eps,
            grid,
            out,
        } => write_poly(kind, k, alpha, eps, grid, &out)?,
    }
    Ok(())
}

fn require<T>(value: Option<T>, flag: &str, kind: &str) -> ridgeproj::Result<T> {
    value.ok_or_else(|| Error::Domain(format!("--kind {kind} needs {flag}")))
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        if n == 1 {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    })
}

fn write_poly(
    kind: PolyKind,
    k: Option<usize>,
    alpha: Option<f64>,
    eps: Option<f64>,
    grid: usize,
    out: &Path,
) -> ridgeproj::Result<()> {
    if grid < 2 {
        return Err(Error::Domain(format!(
            "--grid must be at least 2, got {grid}"
        )));
    }
    match kind {
        PolyKind::Pk => {
            let k = require(k, "--k", "pk")?;
            let rows = linspace(-1.0, 1.0, grid)
                .map(|x| Ok(vec![x, p_k_eval(x, k)?]))
                .collect::<ridgeproj::Result<Vec<_>>>()?;
            save_table(out, &["x", "p_k"], &rows)
        }
        PolyKind::Bound => {
            let k = require(k, "--k", "bound")?;
            let rows = (1..=grid)
                .map(|i| {
                    let x = i as f64 / grid as f64;
                    Ok(vec![x, p_k_eval(x, k)?, sign_error_bound(x, k)?])
                })
                .collect::<ridgeproj::Result<Vec<_>>>()?;
            save_table(out, &["x", "p_k", "bound"], &rows)
        }
        PolyKind::Chebyshev => {
            let alpha = require(alpha, "--alpha", "chebyshev")?;
            let eps = require(eps, "--eps", "chebyshev")?;
            let plan = CompressionPlan::new(alpha, eps)?;
            let q = compressed_sign_poly(alpha, eps)?;
            let rows = linspace(-1.0, 1.0, grid)
                .map(|x| Ok(vec![x, q.eval(x), p_k_eval(x, plan.k)?]))
                .collect::<ridgeproj::Result<Vec<_>>>()?;
            save_table(out, &["x", "compressed", "uncompressed"], &rows)
        }
    }
}
