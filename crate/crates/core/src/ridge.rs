//! Ridge regression by conjugate gradient on `M = AᵀA + λI`.

use crate::error::{check_finite, check_len, Error, Result};
use crate::matrix::{gram_apply, DesignMatrix};
use crate::spectral::MatrixStats;
use crate::vecops::{axpy, dot, norm2};

/// Parameters of one ridge solve.
///
/// `delta` is the failure probability a randomized solver would be allowed.
/// Conjugate gradient is deterministic and never fails within its iteration
/// cap, so the value is carried for interface parity and otherwise ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RidgeParams {
    pub lambda: f64,
    pub eps: f64,
    pub delta: f64,
    /// `None` selects [`RidgeParams::default_max_iters`].
    pub max_iters: Option<usize>,
}

impl RidgeParams {
    pub fn new(lambda: f64, eps: f64) -> Self {
        RidgeParams {
            lambda,
            eps,
            delta: 0.01,
            max_iters: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Domain(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::Domain(format!(
                "ridge eps must lie in (0, 1), got {}",
                self.eps
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Domain(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        Ok(())
    }

    /// `10·⌈√(κ_λ+1)·ln(2/ε)⌉`
    pub fn default_max_iters(&self, stats: &MatrixStats) -> usize {
        let k = stats.kappa_lambda.max(0.0);
        10 * ((k + 1.0).sqrt() * (2.0 / self.eps).ln()).ceil().max(1.0) as usize
    }

    /// Residual norm at which CG stops:
    /// `ε·‖y‖₂·√(λ/(σ̂₁²+λ))`.
    pub fn threshold(&self, stats: &MatrixStats, y_norm: f64) -> f64 {
        let s2 = stats.sigma1_estimate * stats.sigma1_estimate;
        self.eps * y_norm * (self.lambda / (s2 + self.lambda)).sqrt()
    }
}

/// Solution plus what it took to get there.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeReport {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Euclidean norm of `y − Mx`, recomputed from scratch at exit.
    pub residual: f64,
    pub threshold: f64,
}

/// Returns `x̃` with `‖x̃ − M⁻¹y‖_M ≤ ε‖y‖_{M⁻¹}`.
///
/// The stopping rule certifies this through `‖r‖_{M⁻¹} ≤ ‖r‖₂/√λ` and
/// `‖y‖_{M⁻¹} ≥ ‖y‖₂/√(σ₁²+λ)`, which is why `stats.sigma1_estimate` must not
/// underestimate `σ₁` by more than the power-iteration slack.
pub fn ridge_solve(
    a: &DesignMatrix,
    params: &RidgeParams,
    y: &[f64],
    stats: &MatrixStats,
) -> Result<Vec<f64>> {
    ridge_solve_report(a, params, y, stats).map(|r| r.x)
}

pub fn ridge_solve_report(
    a: &DesignMatrix,
    params: &RidgeParams,
    y: &[f64],
    stats: &MatrixStats,
) -> Result<RidgeReport> {
    params.validate()?;
    check_len("ridge_solve right-hand side", a.n_cols(), y.len())?;
    check_finite("ridge_solve right-hand side", y)?;
    let d = y.len();
    let y_norm = norm2(y);
    let threshold = params.threshold(stats, y_norm);
    let max_iters = params
        .max_iters
        .unwrap_or_else(|| params.default_max_iters(stats));
    let mut x = vec![0.0; d];
    if y_norm == 0.0 {
        return Ok(RidgeReport {
            x,
            iterations: 0,
            residual: 0.0,
            threshold,
        });
    }

    let lambda = params.lambda;
    let mut r = y.to_vec();
    let mut p = r.clone();
    let mut mp = vec![0.0; d];
    let mut rr = dot(&r, &r);
    let mut iterations = 0;
    while iterations < max_iters {
        a.gram_apply_into(&p, &mut mp);
        axpy(lambda, &p, &mut mp);
        let alpha = rr / dot(&p, &mp);
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &mp, &mut r);
        iterations += 1;
        let rr_new = dot(&r, &r);
        if rr_new.sqrt() <= threshold {
            // The recursive residual drifts from the true one; confirm before
            // accepting and restart from the true residual if they disagree.
            let true_r = true_residual(a, lambda, &x, y);
            let norm = norm2(&true_r);
            if norm <= threshold {
                return Ok(RidgeReport {
                    x,
                    iterations,
                    residual: norm,
                    threshold,
                });
            }
            r = true_r;
            p.copy_from_slice(&r);
            rr = norm * norm;
            continue;
        }
        let beta = rr_new / rr;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        rr = rr_new;
    }
    Err(Error::RidgeNotConverged {
        iterations,
        residual: norm2(&true_residual(a, lambda, &x, y)),
        threshold,
    })
}

fn true_residual(a: &DesignMatrix, lambda: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut mx = vec![0.0; x.len()];
    a.gram_apply_into(x, &mut mx);
    axpy(lambda, x, &mut mx);
    y.iter().zip(&mx).map(|(a, b)| a - b).collect()
}

/// `(AᵀA+λI)⁻¹AᵀA x`, the smooth projection `r(AᵀA)` with `r(σ²) = σ²/(σ²+λ)`.
///
/// Euclidean error is at most `(σ₁/√λ)·ε·‖x‖₂`.
pub fn ridge_apply_gram(
    a: &DesignMatrix,
    params: &RidgeParams,
    x: &[f64],
    stats: &MatrixStats,
) -> Result<Vec<f64>> {
    check_len("ridge_apply_gram input", a.n_cols(), x.len())?;
    let g = gram_apply(a, x)?;
    ridge_solve(a, params, &g, stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn examples() {
        let eps = 1e-10;
        let i2 = DesignMatrix::identity(2);
        let st = MatrixStats::from_sigma1(&i2, 1.0, 1.0).unwrap();
        let x = ridge_solve(&i2, &RidgeParams::new(1.0, eps), &[2.0, 4.0], &st).unwrap();
        close(&x, &[1.0, 2.0], 1e-9);
        let x = ridge_solve(&i2, &RidgeParams::new(1.0, eps), &[0.0, 0.0], &st).unwrap();
        assert_eq!(x, vec![0.0, 0.0]);

        let a = DesignMatrix::diag(&[2.0, 0.5]).unwrap();
        let st = MatrixStats::from_sigma1(&a, 2.0, 1.0).unwrap();
        let x = ridge_solve(&a, &RidgeParams::new(1.0, eps), &[5.0, 5.0], &st).unwrap();
        close(&x, &[1.0, 4.0], 1e-9);
    }

    #[test]
    fn smooth_projection_examples() {
        let a = DesignMatrix::diag(&[2.0, 0.5]).unwrap();
        let st = MatrixStats::from_sigma1(&a, 2.0, 1.0).unwrap();
        let p = RidgeParams::new(1.0, 1e-12);
        let x = ridge_apply_gram(&a, &p, &[1.0, 1.0], &st).unwrap();
        close(&x, &[0.8, 0.2], 1e-10);

        // null-space direction maps to zero
        let a = DesignMatrix::from_rows(&[[1.0, 0.0], [0.0, 0.0]]).unwrap();
        let st = MatrixStats::from_sigma1(&a, 1.0, 1.0).unwrap();
        let x = ridge_apply_gram(&a, &p, &[0.0, 3.0], &st).unwrap();
        close(&x, &[0.0, 0.0], 1e-12);
        // eigenvalue equal to λ halves the coordinate
        let x = ridge_apply_gram(&a, &p, &[3.0, 0.0], &st).unwrap();
        close(&x, &[1.5, 0.0], 1e-10);
    }

    #[test]
    fn report_residual_under_threshold() {
        let a =
            DesignMatrix::from_rows(&[[1.0, 2.0, 0.0], [0.5, -1.0, 3.0], [2.0, 0.0, 1.0]]).unwrap();
        let st = MatrixStats::new(&a, 0.3, 1).unwrap();
        let rep =
            ridge_solve_report(&a, &RidgeParams::new(0.3, 1e-8), &[1.0, -2.0, 0.5], &st).unwrap();
        assert!(rep.residual <= rep.threshold);
        assert!(rep.iterations >= 1);
    }

    #[test]
    fn iteration_cap_reports_residual() {
        let a = DesignMatrix::diag(&[3.0, 2.0, 1.0, 0.5]).unwrap();
        let st = MatrixStats::from_sigma1(&a, 3.0, 0.01).unwrap();
        let mut p = RidgeParams::new(0.01, 1e-12);
        p.max_iters = Some(1);
        match ridge_solve(&a, &p, &[1.0, 1.0, 1.0, 1.0], &st) {
            Err(Error::RidgeNotConverged {
                iterations,
                residual,
                threshold,
            }) => {
                assert_eq!(iterations, 1);
                assert!(residual > threshold);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        let a = DesignMatrix::identity(2);
        let st = MatrixStats::from_sigma1(&a, 1.0, 1.0).unwrap();
        let p = RidgeParams::new(1.0, 0.1);
        assert!(matches!(
            ridge_solve(&a, &p, &[1.0], &st),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            ridge_solve(&a, &p, &[1.0, f64::NAN], &st),
            Err(Error::NonFinite(_))
        ));
        assert!(ridge_solve(&a, &RidgeParams::new(0.0, 0.1), &[1.0, 1.0], &st).is_err());
        assert!(ridge_solve(&a, &RidgeParams::new(1.0, 1.5), &[1.0, 1.0], &st).is_err());
    }

    #[test]
    fn default_iteration_cap() {
        let a = DesignMatrix::identity(2);
        let st = MatrixStats::from_sigma1(&a, 3.0, 1.0).unwrap(); // κ = 9
        let p = RidgeParams::new(1.0, 0.5);
        // √10 · ln 4 = 4.38 → 5
        assert_eq!(p.default_max_iters(&st), 50);
    }
}
