//! Spectral norm estimation and the per-matrix constants the solvers need.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::DesignMatrix;
use crate::vecops::{dot, norm2};

/// Relative tolerance of the power iteration behind [`MatrixStats::new`].
pub const STATS_TOL: f64 = 1e-3;

pub const DEFAULT_POWER_ITERS: usize = 10_000;

/// Power iteration on `AᵀA` from a seeded standard-normal start.
///
/// Stops once an Aitken-style estimate of the remaining change in the Rayleigh
/// quotient falls below `tol` times the current value, and returns the square
/// root of that quotient. The quotient approaches `σ₁²` from below, so the
/// returned value is an underestimate up to the stopping slack.
pub fn spectral_norm_estimate(
    a: &DesignMatrix,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<f64> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tol must lie in (0, 1), got {tol}")));
    }
    if a.is_zero() {
        return Err(Error::RankZero);
    }
    let d = a.n_cols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let nx = norm2(&x);
    x.iter_mut().for_each(|v| *v /= nx);

    let mut next = vec![0.0; d];
    let mut prev_mu = f64::NAN;
    let mut prev_delta = f64::NAN;
    let mut mu = 0.0;
    for it in 1..=max_iters {
        a.gram_apply_into(&x, &mut next);
        // x is unit length, so xᵀAᵀAx is the Rayleigh quotient
        mu = dot(&x, &next);
        let nn = norm2(&next);
        if nn == 0.0 {
            // start vector landed in the null space; the quotient is exactly 0
            return Err(Error::RankZero);
        }
        let delta = (mu - prev_mu).abs();
        if delta == 0.0 {
            return Ok(mu.sqrt());
        }
        if it >= 3 && prev_delta.is_finite() {
            let rho = delta / prev_delta;
            if rho < 1.0 && delta * rho / (1.0 - rho) <= tol * mu {
                return Ok(mu.sqrt());
            }
        }
        prev_delta = delta;
        prev_mu = mu;
        for (xi, ni) in x.iter_mut().zip(&next) {
            *xi = ni / nn;
        }
    }
    Err(Error::PowerIteration {
        iterations: max_iters,
        last_estimate: mu.sqrt(),
    })
}

/// Constants computed once per matrix and shared by every ridge call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixStats {
    /// Upper estimate of `σ₁(A)`.
    pub sigma1_estimate: f64,
    pub lambda: f64,
    /// `σ̂₁² / λ`. Not clamped: a λ above `σ₁²` gives a value below 1.
    pub kappa_lambda: f64,
    /// `‖A‖_F² / σ̂₁²`, informational.
    pub stable_rank: f64,
}

impl MatrixStats {
    /// Estimates `σ₁` to [`STATS_TOL`] and inflates it by the same factor so
    /// the result bounds the true value from above.
    pub fn new(a: &DesignMatrix, lambda: f64, seed: u64) -> Result<Self> {
        let sigma = spectral_norm_estimate(a, STATS_TOL, DEFAULT_POWER_ITERS, seed)?;
        Self::from_sigma1(a, sigma * (1.0 + STATS_TOL), lambda)
    }

    /// Uses a caller-supplied bound on `σ₁`, e.g. from an exact factorization.
    pub fn from_sigma1(a: &DesignMatrix, sigma1: f64, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        if !(sigma1 > 0.0 && sigma1.is_finite()) {
            return Err(Error::Domain(format!(
                "sigma1 must be positive and finite, got {sigma1}"
            )));
        }
        let s2 = sigma1 * sigma1;
        Ok(MatrixStats {
            sigma1_estimate: sigma1,
            lambda,
            kappa_lambda: s2 / lambda,
            stable_rank: (a.frobenius_norm_sq() / s2).max(1.0),
        })
    }

    /// `κ_λ` floored at 1, the value iteration counts and tolerances use.
    pub fn kappa_for_bounds(&self) -> f64 {
        self.kappa_lambda.max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svd::svd_small;

    #[test]
    fn diagonal_and_identity() {
        let a = DesignMatrix::diag(&[3.0, 1.0]).unwrap();
        let s = spectral_norm_estimate(&a, 1e-6, 1000, 7).unwrap();
        assert!((s - 3.0).abs() <= 3e-6);
        let s = spectral_norm_estimate(&DesignMatrix::identity(4), 1e-6, 1000, 7).unwrap();
        assert!((s - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn agrees_with_svd() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n, d) in [(100, 60), (40, 90), (200, 30)] {
            let vals = (0..n * d).map(|_| rng.sample(StandardNormal)).collect();
            let a = DesignMatrix::from_dense(n, d, vals).unwrap();
            let exact = svd_small(&a).unwrap().sigma1();
            let tol = 1e-4;
            let est = spectral_norm_estimate(&a, tol, 100_000, 3).unwrap();
            assert!((est - exact).abs() <= tol * exact, "{est} vs {exact}");
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let a = DesignMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]).unwrap();
        let x = spectral_norm_estimate(&a, 1e-8, 1000, 5).unwrap();
        let y = spectral_norm_estimate(&a, 1e-8, 1000, 5).unwrap();
        assert_eq!(x.to_bits(), y.to_bits());
    }

    #[test]
    fn errors() {
        let z = DesignMatrix::from_dense(2, 2, vec![0.0; 4]).unwrap();
        assert!(matches!(
            spectral_norm_estimate(&z, 1e-3, 10, 0),
            Err(Error::RankZero)
        ));
        let a = DesignMatrix::identity(2);
        assert!(spectral_norm_estimate(&a, 0.0, 10, 0).is_err());
        // nearly tied top pair converges slowly
        let a = DesignMatrix::diag(&[1.0, 0.999_999, 0.5]).unwrap();
        match spectral_norm_estimate(&a, 1e-15, 3, 0) {
            Err(Error::PowerIteration {
                iterations,
                last_estimate,
            }) => {
                assert_eq!(iterations, 3);
                assert!(last_estimate > 0.5 && last_estimate <= 1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn stats_bound_sigma_from_above() {
        let a = DesignMatrix::diag(&[2.0, 0.5]).unwrap();
        let st = MatrixStats::new(&a, 1.0, 0).unwrap();
        assert!(st.sigma1_estimate >= 2.0);
        assert!(st.sigma1_estimate <= 2.0 * (1.0 + 2.0 * STATS_TOL));
        assert_eq!(st.kappa_lambda, st.sigma1_estimate.powi(2) / 1.0);
        assert!(st.stable_rank >= 1.0);
        let low = MatrixStats::from_sigma1(&a, 2.0, 10.0).unwrap();
        assert!(low.kappa_lambda < 1.0);
        assert_eq!(low.kappa_for_bounds(), 1.0);
    }
}
