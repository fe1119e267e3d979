//! Convergence experiments: run a solver with a fixed iteration count and
//! record its error against the exact factorization after every iteration.

use crate::error::{Error, Result};
use crate::matrix::DesignMatrix;
use crate::pcr::{pc_regress_trace, PcrConfig};
use crate::projection::{pc_proj_trace, ProjectionConfig};
use crate::spectral::MatrixStats;
use crate::svd::svd_small;
use crate::synth::SyntheticProblem;
use crate::trace::{ConvergenceTrace, TraceAlgorithm};

/// Seed of the power iteration that sizes `κ_λ` in experiments.
pub const STATS_SEED: u64 = 0;

/// Trace for a synthetic problem, using its converted gap parameter.
///
/// Projection runs project `Aᵀb` and report `‖s_k − Py‖₂/‖Py‖₂`; regression
/// runs report `‖s_k − A_λ⁺b‖²_{AᵀA}/‖A_λ⁺b‖²_{AᵀA}`. `max_q` is the number of
/// outer iterations (projection) or series steps (regression); the trace has
/// `max_q + 1` entries.
pub fn run_convergence(
    problem: &SyntheticProblem,
    algo: TraceAlgorithm,
    eps: f64,
    max_q: usize,
) -> Result<ConvergenceTrace> {
    let mut trace = run_convergence_on(
        &problem.a,
        &problem.b,
        problem.lambda,
        problem.projection_gamma(),
        algo,
        eps,
        max_q,
    )?;
    trace.metadata.seed = Some(problem.seed);
    Ok(trace)
}

/// Trace for an arbitrary matrix and right-hand side.
///
/// For projection, `rhs` of length `n` is mapped through `Aᵀ`; a vector of
/// length `d` (with `d ≠ n`) is projected as given. Regression needs length
/// `n`.
pub fn run_convergence_on(
    a: &DesignMatrix,
    rhs: &[f64],
    lambda: f64,
    gamma: f64,
    algo: TraceAlgorithm,
    eps: f64,
    max_q: usize,
) -> Result<ConvergenceTrace> {
    if max_q == 0 {
        return Err(Error::Domain("max iterations must be at least 1".into()));
    }
    let oracle = svd_small(a)?;
    let stats = MatrixStats::new(a, lambda, STATS_SEED)?;
    match algo {
        TraceAlgorithm::Projection => {
            let y = if rhs.len() == a.n_rows() {
                a.matvec_t(rhs)?
            } else {
                rhs.to_vec()
            };
            let cfg = ProjectionConfig {
                q_override: Some(max_q),
                ..ProjectionConfig::new(lambda, gamma, eps)
            };
            pc_proj_trace(a, &cfg, &y, &stats, Some(&oracle)).map(|(_, t)| t)
        }
        TraceAlgorithm::Regression => {
            let cfg = PcrConfig {
                q_override: Some(max_q),
                ..PcrConfig::new(lambda, gamma, eps)
            };
            pc_regress_trace(a, &cfg, rhs, &stats, Some(&oracle)).map(|(_, t)| t)
        }
    }
}
