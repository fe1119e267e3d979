//! Projection onto the principal components with `σ² ≥ λ` using only ridge
//! regression.
//!
//! The smooth projection `B = (AᵀA+λI)⁻¹AᵀA` maps a squared singular value
//! `σ²` to `σ²/(σ²+λ)`, which is above ½ exactly when `σ² > λ`. Running the
//! step recurrence on `B` sharpens it into the hard projection.

use crate::error::{check_finite, check_len, Error, Result};
use crate::matrix::DesignMatrix;
use crate::operator::{Operator, SmoothProjection};
use crate::ridge::RidgeParams;
use crate::spectral::MatrixStats;
use crate::step::{default_step_iterations, IterateState};
use crate::svd::{exact_projection, SvdFactors};
use crate::trace::{ConvergenceTrace, TraceAlgorithm, TraceMetadata};
use crate::vecops::{dist2, norm2};

/// Smallest ridge tolerance handed to the inner solver. Derived tolerances
/// can fall far below what 64-bit arithmetic resolves; past this point a
/// tighter request only burns iterations.
pub const RIDGE_EPS_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionConfig {
    pub lambda: f64,
    /// Gap of the smooth projection's spectrum around ½.
    pub gamma: f64,
    pub eps: f64,
    /// Failure probability, split evenly over the ridge calls. The CG solver
    /// is deterministic, so this never changes the result.
    pub delta: f64,
    /// When set, `q = ⌈c1·γ⁻²·ln(1/ε)⌉`; otherwise the step engine's
    /// `⌈(2γ)⁻²·ln(2/ε)⌉`.
    pub c1: Option<f64>,
    /// Inner tolerance divisor: `ε′ = ε²γ²/(c2·√κ_λ)`.
    pub c2: f64,
    pub q_override: Option<usize>,
    pub eps_inner_override: Option<f64>,
    /// Use margin `γ` rather than `2γ` for the default iteration count.
    pub strict_gap: bool,
}

impl ProjectionConfig {
    pub fn new(lambda: f64, gamma: f64, eps: f64) -> Self {
        ProjectionConfig {
            lambda,
            gamma,
            eps,
            delta: 0.01,
            c1: None,
            c2: 8.0,
            q_override: None,
            eps_inner_override: None,
            strict_gap: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must lie in (0, 1), got {v}")))
            }
        };
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Domain(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        unit("gamma", self.gamma)?;
        unit("eps", self.eps)?;
        unit("delta", self.delta)?;
        if let Some(c1) = self.c1 {
            if !(c1 > 0.0 && c1.is_finite()) {
                return Err(Error::Domain(format!("c1 must be positive, got {c1}")));
            }
        }
        if !(self.c2 > 0.0 && self.c2.is_finite()) {
            return Err(Error::Domain(format!(
                "c2 must be positive, got {}",
                self.c2
            )));
        }
        if self.q_override == Some(0) {
            return Err(Error::Domain("q must be at least 1".into()));
        }
        if let Some(e) = self.eps_inner_override {
            unit("inner eps", e)?;
        }
        Ok(())
    }

    /// Outer iteration count `q`.
    pub fn iterations(&self) -> Result<usize> {
        self.validate()?;
        if let Some(q) = self.q_override {
            return Ok(q);
        }
        match self.c1 {
            Some(c1) => Ok(crate::poly::sign::ceil_tolerant(
                c1 * (1.0 / self.eps).ln() / (self.gamma * self.gamma),
            )
            .max(1)),
            None => default_step_iterations(self.gamma, self.eps, self.strict_gap),
        }
    }

    /// Ridge tolerance `ε′ = ε²γ²/(c2·√κ_λ)`, floored at [`RIDGE_EPS_FLOOR`]
    /// unless overridden.
    pub fn inner_eps(&self, stats: &MatrixStats) -> f64 {
        if let Some(e) = self.eps_inner_override {
            return e;
        }
        let derived = self.eps * self.eps * self.gamma * self.gamma
            / (self.c2 * stats.kappa_for_bounds().sqrt());
        derived.max(RIDGE_EPS_FLOOR)
    }

    /// `δ′ = δ/(2q)`.
    pub fn inner_delta(&self) -> Result<f64> {
        Ok(self.delta / (2 * self.iterations()?) as f64)
    }

    pub fn ridge_params(&self, stats: &MatrixStats) -> Result<RidgeParams> {
        Ok(RidgeParams {
            lambda: self.lambda,
            eps: self.inner_eps(stats),
            delta: self.inner_delta()?,
            max_iters: None,
        })
    }
}

/// Checks `7·q·err ≤ ε`, the accumulated operator error the step recurrence
/// can absorb.
fn check_noise(q: usize, err_bound: f64, eps: f64) -> Result<()> {
    if 7.0 * q as f64 * err_bound > eps {
        return Err(Error::BudgetExhausted {
            requested: q,
            allowed: (eps / (7.0 * err_bound)).floor() as usize,
            err_bound,
        });
    }
    Ok(())
}

fn prepare<'a>(
    a: &'a DesignMatrix,
    cfg: &ProjectionConfig,
    y: &[f64],
    stats: &'a MatrixStats,
) -> Result<(usize, SmoothProjection<'a>)> {
    cfg.validate()?;
    check_len("projection input", a.n_cols(), y.len())?;
    check_finite("projection input", y)?;
    let q = cfg.iterations()?;
    let op = SmoothProjection::new(a, cfg.ridge_params(stats)?, stats);
    check_noise(q, op.err_bound(), cfg.eps)?;
    Ok((q, op))
}

/// Approximates `P_{A_λ} y`, the projection of `y` onto the right singular
/// vectors with `σ² ≥ λ`.
///
/// When every `σ²` lies outside `((1−4γ)λ, λ/(1−4γ))` the result is within
/// `ε‖y‖₂` of the exact projection. Inside that window the output is a
/// monotone soft projection: partial weights rather than 0 or 1. The gap is
/// not detected.
pub fn pc_proj(
    a: &DesignMatrix,
    cfg: &ProjectionConfig,
    y: &[f64],
    stats: &MatrixStats,
) -> Result<Vec<f64>> {
    let (q, op) = prepare(a, cfg, y, stats)?;
    if norm2(y) == 0.0 {
        return Ok(vec![0.0; y.len()]);
    }
    let mut state = IterateState::start(&op, y)?;
    for _ in 0..q {
        state.advance(&op)?;
    }
    Ok(state.s)
}

/// [`pc_proj`] plus the relative error `‖s_k − Py‖₂/‖Py‖₂` after each of the
/// `q + 1` iterates (initial smooth projection included).
///
/// `Py` comes from `oracle` when given, otherwise the final iterate stands in
/// for it. If `Py` is zero the errors are relative to `‖y‖₂`.
pub fn pc_proj_trace(
    a: &DesignMatrix,
    cfg: &ProjectionConfig,
    y: &[f64],
    stats: &MatrixStats,
    oracle: Option<&SvdFactors>,
) -> Result<(Vec<f64>, ConvergenceTrace)> {
    let (q, op) = prepare(a, cfg, y, stats)?;
    let mut trace = ConvergenceTrace::new(
        TraceAlgorithm::Projection,
        TraceMetadata {
            gamma: cfg.gamma,
            lambda: cfg.lambda,
            eps: cfg.eps,
            seed: None,
        },
    );
    if norm2(y) == 0.0 {
        (0..=q).for_each(|_| trace.push(0.0));
        return Ok((vec![0.0; y.len()], trace));
    }
    let reference = oracle
        .map(|f| exact_projection(f, cfg.lambda, y))
        .transpose()?;

    let mut state = IterateState::start(&op, y)?;
    let mut iterates = Vec::new();
    let mut record = |s: &[f64], trace: &mut ConvergenceTrace| match &reference {
        Some(r) => trace.push(dist2(s, r) / denominator(r, y)),
        None => iterates.push(s.to_vec()),
    };
    record(&state.s, &mut trace);
    for _ in 0..q {
        state.advance(&op)?;
        record(&state.s, &mut trace);
    }
    if reference.is_none() {
        let den = denominator(&state.s, y);
        for s in &iterates {
            trace.push(dist2(s, &state.s) / den);
        }
    }
    Ok((state.s, trace))
}

fn denominator(reference: &[f64], y: &[f64]) -> f64 {
    let n = norm2(reference);
    if n > 0.0 {
        n
    } else {
        norm2(y)
    }
}
