//! Principal component regression from a projection and a few ridge solves.
//!
//! With `y = P_{A_λ}Aᵀb` the answer is `(AᵀA)⁻¹y`, but inverting `AᵀA`
//! directly amplifies any leftover weight on small singular values. Instead
//! `(AᵀA)⁻¹ = g(M⁻¹)` on the kept subspace with `M = AᵀA + λI` and
//! `g(x) = Σ_{i≥1} λ^{i−1}xⁱ`; on that subspace `x ≤ 1/(2λ)`, so the series
//! converges at least as fast as `2^{-i}` and every term is a ridge solve.

use crate::error::{check_finite, check_len, Error, Result};
use crate::matrix::{gram_norm, DesignMatrix};
use crate::operator::{Operator, RidgeInverse};
use crate::projection::{pc_proj, ProjectionConfig};
use crate::ridge::RidgeParams;
use crate::spectral::MatrixStats;
use crate::svd::{exact_pcr, SvdFactors};
use crate::trace::{ConvergenceTrace, TraceAlgorithm, TraceMetadata};
use crate::vecops::{axpy, dist2, norm2, sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcrConfig {
    pub lambda: f64,
    /// Gap parameter forwarded to the inner projection.
    pub gamma: f64,
    pub eps: f64,
    /// Half goes to the projection, the rest is split over the series solves.
    pub delta: f64,
    /// Series length `q = ⌈c1·ln(κ_λ/ε)⌉`.
    pub c1: f64,
    /// Inner tolerance `ε′ = ε/(c2·q²·√κ_λ)`.
    pub c2: f64,
    pub q_override: Option<usize>,
    pub eps_inner_override: Option<f64>,
    /// Passed through to the inner projection.
    pub strict_gap: bool,
}

impl PcrConfig {
    pub fn new(lambda: f64, gamma: f64, eps: f64) -> Self {
        PcrConfig {
            lambda,
            gamma,
            eps,
            delta: 0.01,
            c1: 2.0,
            c2: 4.0,
            q_override: None,
            eps_inner_override: None,
            strict_gap: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Domain(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        for (name, v) in [
            ("gamma", self.gamma),
            ("eps", self.eps),
            ("delta", self.delta),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Domain(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0 && self.c1.is_finite() && self.c2.is_finite()) {
            return Err(Error::Domain("c1 and c2 must be positive".into()));
        }
        if self.q_override == Some(0) {
            return Err(Error::Domain("q must be at least 1".into()));
        }
        if let Some(e) = self.eps_inner_override {
            if !(e > 0.0 && e < self.eps) {
                return Err(Error::Domain(format!(
                    "inner eps must lie in (0, eps), got {e}"
                )));
            }
        }
        Ok(())
    }

    /// Number of series steps after the first solve.
    pub fn iterations(&self, stats: &MatrixStats) -> Result<usize> {
        self.validate()?;
        if let Some(q) = self.q_override {
            return Ok(q);
        }
        let k = stats.kappa_for_bounds();
        Ok(crate::poly::sign::ceil_tolerant(self.c1 * (k / self.eps).ln()).max(1))
    }

    pub fn inner_eps(&self, stats: &MatrixStats) -> Result<f64> {
        if let Some(e) = self.eps_inner_override {
            return Ok(e);
        }
        let q = self.iterations(stats)? as f64;
        Ok(self.eps / (self.c2 * q * q * stats.kappa_for_bounds().sqrt()))
    }

    /// Configuration of the projection of `Aᵀb`: tolerance `ε′`, failure
    /// budget `δ/2`.
    pub fn projection_config(&self, stats: &MatrixStats) -> Result<ProjectionConfig> {
        Ok(ProjectionConfig {
            delta: self.delta / 2.0,
            strict_gap: self.strict_gap,
            ..ProjectionConfig::new(self.lambda, self.gamma, self.inner_eps(stats)?)
        })
    }

    pub fn ridge_params(&self, stats: &MatrixStats) -> Result<RidgeParams> {
        let q = self.iterations(stats)?;
        Ok(RidgeParams {
            lambda: self.lambda,
            eps: self.inner_eps(stats)?,
            delta: self.delta / (2 * (q + 1)) as f64,
            max_iters: None,
        })
    }
}

/// `Σ_{i=1}^{q} λ^{i−1}(M⁻¹)ⁱ y0` via `s ← s₁ + λ·M⁻¹s` with `s₁ = M⁻¹y0`.
///
/// Each application of `ridge_op` is labelled `series step k` on failure.
pub fn truncated_g_series<O: Operator>(
    q: usize,
    lambda: f64,
    ridge_op: &O,
    y0: &[f64],
) -> Result<Vec<f64>> {
    let mut out = None;
    series_with(q, lambda, ridge_op, y0, |_, s| out = Some(s.to_vec()))?;
    Ok(out.unwrap_or_else(|| vec![0.0; y0.len()]))
}

/// Runs the series, handing each partial sum to `visit` (term count from 1).
fn series_with<O: Operator>(
    q: usize,
    lambda: f64,
    ridge_op: &O,
    y0: &[f64],
    mut visit: impl FnMut(usize, &[f64]),
) -> Result<()> {
    if q == 0 {
        return Err(Error::Domain("series needs at least one term".into()));
    }
    check_len("series input", ridge_op.dim(), y0.len())?;
    let label = |k: usize| move |e: Error| e.in_stage(format!("series step {k}"));
    let s1 = ridge_op.apply(y0).map_err(label(0))?;
    visit(1, &s1);
    let mut s = s1.clone();
    for k in 1..q {
        let mut next = ridge_op.apply(&s).map_err(label(k))?;
        next.iter_mut().for_each(|v| *v *= lambda);
        axpy(1.0, &s1, &mut next);
        s = next;
        visit(k + 1, &s);
    }
    Ok(())
}

/// Partial sum `Σ_{i=1}^k λ^{i−1}xⁱ` of the scalar series.
pub fn g_series_partial(x: f64, lambda: f64, k: usize) -> f64 {
    let mut term = x;
    let mut sum = 0.0;
    for _ in 0..k {
        sum += term;
        term *= lambda * x;
    }
    sum
}

/// `1/(2^k·λ)`, bounding the tail after `k` terms for `x ≤ 1/(2λ)`.
pub fn g_tail_bound(k: usize, lambda: f64) -> f64 {
    0.5f64.powi(k as i32) / lambda
}

/// Approximates the principal component regression solution `A_λ⁺b`.
///
/// Under the same spectral gap condition as [`pc_proj`] the result satisfies
/// `‖s − A_λ⁺b‖_{AᵀA} ≤ ε‖b‖₂`. Failures are labelled `projection` or
/// `series step k`.
pub fn pc_regress(
    a: &DesignMatrix,
    cfg: &PcrConfig,
    b: &[f64],
    stats: &MatrixStats,
) -> Result<Vec<f64>> {
    let y = project_rhs(a, cfg, b, stats)?;
    pc_regress_from_projection(a, cfg, &y, stats)
}

/// The series stage alone, applied to an already projected `y ≈ P_{A_λ}Aᵀb`.
pub fn pc_regress_from_projection(
    a: &DesignMatrix,
    cfg: &PcrConfig,
    y: &[f64],
    stats: &MatrixStats,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    check_len("projected input", a.n_cols(), y.len())?;
    check_finite("projected input", y)?;
    let q = cfg.iterations(stats)?;
    let op = RidgeInverse::new(a, cfg.ridge_params(stats)?, stats);
    truncated_g_series(q + 1, cfg.lambda, &op, y)
}

fn project_rhs(
    a: &DesignMatrix,
    cfg: &PcrConfig,
    b: &[f64],
    stats: &MatrixStats,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    check_len("regression right-hand side", a.n_rows(), b.len())?;
    check_finite("regression right-hand side", b)?;
    let atb = a.matvec_t(b)?;
    let pcfg = cfg.projection_config(stats)?;
    pc_proj(a, &pcfg, &atb, stats).map_err(|e| e.in_stage("projection"))
}

/// [`pc_regress`] plus the squared relative error
/// `‖s_k − x*‖²_{AᵀA}/‖x*‖²_{AᵀA}` after each of the `q + 1` series partial
/// sums, where `x*` is the oracle's solution or else the final iterate. If
/// `‖x*‖_{AᵀA}` is zero the errors are relative to `‖b‖₂²`.
pub fn pc_regress_trace(
    a: &DesignMatrix,
    cfg: &PcrConfig,
    b: &[f64],
    stats: &MatrixStats,
    oracle: Option<&SvdFactors>,
) -> Result<(Vec<f64>, ConvergenceTrace)> {
    let y = project_rhs(a, cfg, b, stats)?;
    let q = cfg.iterations(stats)?;
    let op = RidgeInverse::new(a, cfg.ridge_params(stats)?, stats);
    let mut iterates = Vec::with_capacity(q + 1);
    series_with(q + 1, cfg.lambda, &op, &y, |_, s| iterates.push(s.to_vec()))?;
    let last = iterates.last().cloned().unwrap_or_default();
    let reference = match oracle {
        Some(f) => exact_pcr(f, cfg.lambda, b)?,
        None => last.clone(),
    };
    let den = {
        let g = gram_norm(a, &reference)?;
        if g > 0.0 {
            g * g
        } else {
            norm2(b).powi(2)
        }
    };
    let mut trace = ConvergenceTrace::new(
        TraceAlgorithm::Regression,
        TraceMetadata {
            gamma: cfg.gamma,
            lambda: cfg.lambda,
            eps: cfg.eps,
            seed: None,
        },
    );
    for s in &iterates {
        let e = gram_norm(a, &sub(s, &reference))?;
        trace.push(if den > 0.0 { e * e / den } else { 0.0 });
    }
    Ok((last, trace))
}

/// Distance between a solution and a reference in the two norms reported
/// for regression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionError {
    /// `‖s − x‖_{AᵀA} = ‖A(s − x)‖₂`
    pub gram: f64,
    pub euclidean: f64,
}

pub fn solution_error(a: &DesignMatrix, s: &[f64], reference: &[f64]) -> Result<SolutionError> {
    check_len("solution", reference.len(), s.len())?;
    Ok(SolutionError {
        gram: gram_norm(a, &sub(s, reference))?,
        euclidean: dist2(s, reference),
    })
}
