//! Symmetric linear maps available only through (possibly inexact)
//! application to a vector.

use crate::error::{check_len, Result};
use crate::matrix::DesignMatrix;
use crate::ridge::{ridge_apply_gram, ridge_solve, RidgeParams};
use crate::spectral::MatrixStats;

/// A black-box approximation of `x ↦ Sx`.
///
/// `err_bound` is the advertised additive error: `‖apply(x) − Sx‖₂ ≤
/// err_bound·‖x‖₂`. Implementations that compute exactly (up to rounding)
/// keep the default of zero.
pub trait Operator {
    fn dim(&self) -> usize;

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>>;

    fn err_bound(&self) -> f64 {
        0.0
    }
}

impl<T: Operator + ?Sized> Operator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).apply(x)
    }

    fn err_bound(&self) -> f64 {
        (**self).err_bound()
    }
}

/// An explicit square matrix, row-major.
#[derive(Debug, Clone)]
pub struct DenseSymmetric {
    dim: usize,
    values: Vec<f64>,
}

impl DenseSymmetric {
    /// Takes the matrix as given; symmetry is the caller's contract.
    pub fn new(dim: usize, values: Vec<f64>) -> Result<Self> {
        check_len("DenseSymmetric values", dim * dim, values.len())?;
        Ok(DenseSymmetric { dim, values })
    }

    pub fn diag(entries: &[f64]) -> Self {
        let dim = entries.len();
        let mut values = vec![0.0; dim * dim];
        for (i, &e) in entries.iter().enumerate() {
            values[i * dim + i] = e;
        }
        DenseSymmetric { dim, values }
    }

    /// `Q diag(eigenvalues) Qᵀ` from orthonormal columns `q`.
    pub fn from_eigenpairs(q: &[Vec<f64>], eigenvalues: &[f64]) -> Result<Self> {
        check_len("eigenpairs", q.len(), eigenvalues.len())?;
        let dim = q.first().map_or(0, Vec::len);
        let mut values = vec![0.0; dim * dim];
        for (v, &e) in q.iter().zip(eigenvalues) {
            check_len("eigenvector", dim, v.len())?;
            for i in 0..dim {
                for j in 0..dim {
                    values[i * dim + j] += e * v[i] * v[j];
                }
            }
        }
        Ok(DenseSymmetric { dim, values })
    }
}

impl Operator for DenseSymmetric {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("operator input", self.dim, x.len())?;
        Ok(self
            .values
            .chunks_exact(self.dim.max(1))
            .take(self.dim)
            .map(|row| crate::vecops::dot(row, x))
            .collect())
    }
}

/// `B = (AᵀA+λI)⁻¹AᵀA` applied through one ridge solve.
pub struct SmoothProjection<'a> {
    a: &'a DesignMatrix,
    params: RidgeParams,
    stats: &'a MatrixStats,
}

impl<'a> SmoothProjection<'a> {
    pub fn new(a: &'a DesignMatrix, params: RidgeParams, stats: &'a MatrixStats) -> Self {
        SmoothProjection { a, params, stats }
    }
}

impl Operator for SmoothProjection<'_> {
    fn dim(&self) -> usize {
        self.a.n_cols()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        ridge_apply_gram(self.a, &self.params, x, self.stats)
    }

    /// `(σ̂₁/√λ)·ε`
    fn err_bound(&self) -> f64 {
        self.stats.sigma1_estimate / self.params.lambda.sqrt() * self.params.eps
    }
}

/// `M⁻¹ = (AᵀA+λI)⁻¹` applied through one ridge solve.
pub struct RidgeInverse<'a> {
    a: &'a DesignMatrix,
    params: RidgeParams,
    stats: &'a MatrixStats,
}

impl<'a> RidgeInverse<'a> {
    pub fn new(a: &'a DesignMatrix, params: RidgeParams, stats: &'a MatrixStats) -> Self {
        RidgeInverse { a, params, stats }
    }
}

impl Operator for RidgeInverse<'_> {
    fn dim(&self) -> usize {
        self.a.n_cols()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        ridge_solve(self.a, &self.params, x, self.stats)
    }

    /// `ε/λ`: the solve meets `‖x̃ − x*‖_M ≤ ε‖y‖_{M⁻¹}`, and
    /// `‖·‖₂ ≤ ‖·‖_M/√λ`, `‖y‖_{M⁻¹} ≤ ‖y‖₂/√λ`.
    fn err_bound(&self) -> f64 {
        self.params.eps / self.params.lambda
    }
}

/// Wraps a closure as an operator, for tests and ad-hoc maps.
pub struct FnOperator<F> {
    dim: usize,
    err_bound: f64,
    f: F,
}

impl<F> FnOperator<F>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    pub fn new(dim: usize, err_bound: f64, f: F) -> Self {
        FnOperator { dim, err_bound, f }
    }
}

impl<F> Operator for FnOperator<F>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("operator input", self.dim, x.len())?;
        (self.f)(x)
    }

    fn err_bound(&self) -> f64 {
        self.err_bound
    }
}
