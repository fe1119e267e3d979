//! Desk-scale singular value decomposition and the exact spectral operators
//! built from it.
//!
//! Nothing in the solvers calls into this module. It exists to check them: the
//! one-sided Jacobi factorization is slow (cubic, several sweeps) but accurate
//! to working precision, which is what an oracle needs.

use crate::error::{check_len, Error, Result};
use crate::matrix::DesignMatrix;
use crate::vecops::{axpy, dot};

/// Largest `min(n, d)` the oracle accepts.
pub const MAX_ORACLE_DIM: usize = 2000;

/// Singular values at or below this fraction of `σ₁` count as zero.
pub const RANK_CUTOFF: f64 = 1e-12;

const MAX_SWEEPS: usize = 80;

/// Thin factorization `A = U Σ Vᵀ` restricted to the numerical rank.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdFactors {
    /// Left singular vectors, one `Vec` of length `n` per column.
    pub u: Vec<Vec<f64>>,
    /// Descending, strictly positive.
    pub singular_values: Vec<f64>,
    /// Right singular vectors (principal components), length `d` each.
    pub v: Vec<Vec<f64>>,
    n_rows: usize,
    n_cols: usize,
}

impl SvdFactors {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn sigma1(&self) -> f64 {
        self.singular_values[0]
    }

    /// Number of components with `σᵢ² ≥ λ`.
    pub fn kept(&self, lambda: f64) -> usize {
        self.singular_values
            .iter()
            .take_while(|&&s| s * s >= lambda)
            .count()
    }

    /// Row-major `U Σ Vᵀ`.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_rows * self.n_cols];
        for ((u, v), &s) in self.u.iter().zip(&self.v).zip(&self.singular_values) {
            for (i, &ui) in u.iter().enumerate() {
                axpy(s * ui, v, &mut out[i * self.n_cols..(i + 1) * self.n_cols]);
            }
        }
        out
    }
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd_small(a: &DesignMatrix) -> Result<SvdFactors> {
    let (n, d) = (a.n_rows(), a.n_cols());
    if n.min(d) > MAX_ORACLE_DIM {
        return Err(Error::Domain(format!(
            "SVD oracle is limited to min(n, d) <= {MAX_ORACLE_DIM}, got {n}x{d}"
        )));
    }
    if a.is_zero() || n == 0 || d == 0 {
        return Err(Error::RankZero);
    }
    let dense = a.to_dense_values();

    // Orthogonalize the columns of whichever of A, Aᵀ is tall.
    let transposed = n < d;
    let (len, m) = if transposed { (d, n) } else { (n, d) };
    let mut cols: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            (0..len)
                .map(|i| {
                    if transposed {
                        dense[j * d + i]
                    } else {
                        dense[i * d + j]
                    }
                })
                .collect()
        })
        .collect();
    let mut basis: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            let mut e = vec![0.0; m];
            e[j] = 1.0;
            e
        })
        .collect();

    let tol = 1e-15;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..m {
            for q in (p + 1)..m {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if alpha == 0.0 || beta == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut basis, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Domain(
            "Jacobi SVD did not converge within the sweep limit".into(),
        ));
    }

    let norms: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma1 = norms[order[0]];
    if sigma1 == 0.0 {
        return Err(Error::RankZero);
    }

    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut singular_values = Vec::new();
    for &j in &order {
        let s = norms[j];
        if s <= RANK_CUTOFF * sigma1 {
            break;
        }
        let w: Vec<f64> = cols[j].iter().map(|x| x / s).collect();
        left.push(w);
        right.push(basis[j].clone());
        singular_values.push(s);
    }
    let (u, v) = if transposed {
        (right, left)
    } else {
        (left, right)
    };
    Ok(SvdFactors {
        u,
        singular_values,
        v,
        n_rows: n,
        n_cols: d,
    })
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let (cp, cq) = (&mut head[p], &mut tail[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// `P_{A_λ} y = V_k V_kᵀ y` for the components with `σ² ≥ λ`.
pub fn exact_projection(f: &SvdFactors, lambda: f64, y: &[f64]) -> Result<Vec<f64>> {
    check_len("exact_projection input", f.n_cols, y.len())?;
    let mut out = vec![0.0; f.n_cols];
    for v in &f.v[..f.kept(lambda)] {
        axpy(dot(v, y), v, &mut out);
    }
    Ok(out)
}

/// `A_λ⁺ b = V_k Σ_k⁻¹ U_kᵀ b`.
pub fn exact_pcr(f: &SvdFactors, lambda: f64, b: &[f64]) -> Result<Vec<f64>> {
    check_len("exact_pcr input", f.n_rows, b.len())?;
    let k = f.kept(lambda);
    let mut out = vec![0.0; f.n_cols];
    for ((u, v), &s) in f.u[..k].iter().zip(&f.v[..k]).zip(&f.singular_values[..k]) {
        axpy(dot(u, b) / s, v, &mut out);
    }
    Ok(out)
}

/// Coordinates of `x` in the right singular basis plus the squared norm of the
/// part of `x` outside it.
fn split(f: &SvdFactors, x: &[f64]) -> (Vec<f64>, f64) {
    let coords: Vec<f64> = f.v.iter().map(|v| dot(v, x)).collect();
    let total = dot(x, x);
    let inside: f64 = coords.iter().map(|c| c * c).sum();
    (coords, (total - inside).max(0.0))
}

/// `(AᵀA + λI)⁻¹ y`, including the null-space part `y_⊥ / λ`.
pub fn ridge_exact(f: &SvdFactors, lambda: f64, y: &[f64]) -> Result<Vec<f64>> {
    check_len("ridge_exact input", f.n_cols, y.len())?;
    let mut out: Vec<f64> = y.iter().map(|v| v / lambda).collect();
    for (v, &s) in f.v.iter().zip(&f.singular_values) {
        let c = dot(v, y);
        axpy(c / (s * s + lambda) - c / lambda, v, &mut out);
    }
    Ok(out)
}

/// `‖x‖_M` with `M = AᵀA + λI`.
pub fn ridge_energy_norm(f: &SvdFactors, lambda: f64, x: &[f64]) -> f64 {
    let (coords, outside) = split(f, x);
    let inside: f64 = coords
        .iter()
        .zip(&f.singular_values)
        .map(|(c, s)| (s * s + lambda) * c * c)
        .sum();
    (inside + lambda * outside).sqrt()
}

/// `‖y‖_{M⁻¹}` with `M = AᵀA + λI`.
pub fn ridge_dual_norm(f: &SvdFactors, lambda: f64, y: &[f64]) -> f64 {
    let (coords, outside) = split(f, y);
    let inside: f64 = coords
        .iter()
        .zip(&f.singular_values)
        .map(|(c, s)| c * c / (s * s + lambda))
        .sum();
    (inside + outside / lambda).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_matrix(n: usize, d: usize, seed: u64) -> DesignMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals = (0..n * d).map(|_| rng.sample(StandardNormal)).collect();
        DesignMatrix::from_dense(n, d, vals).unwrap()
    }

    fn max_gram_deviation(cols: &[Vec<f64>]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in cols.iter().enumerate() {
            for (j, b) in cols.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(a, b) - target).abs());
            }
        }
        worst
    }

    fn check_invariants(a: &DesignMatrix, f: &SvdFactors) {
        assert!(max_gram_deviation(&f.u) <= 1e-10);
        assert!(max_gram_deviation(&f.v) <= 1e-10);
        for w in f.singular_values.windows(2) {
            assert!(w[0] >= w[1] && w[1] > 0.0);
        }
        let recon = f.reconstruct();
        let dense = a.to_dense_values();
        let err: f64 = recon
            .iter()
            .zip(&dense)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        assert!(
            err <= 1e-8 * a.frobenius_norm_sq().sqrt(),
            "reconstruction {err}"
        );
    }

    #[test]
    fn diagonal() {
        let a = DesignMatrix::diag(&[3.0, 1.0]).unwrap();
        let f = svd_small(&a).unwrap();
        assert_eq!(f.singular_values, vec![3.0, 1.0]);
        assert_eq!(f.u, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(f.v, f.u);
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let f = svd_small(&DesignMatrix::identity(5)).unwrap();
        assert_eq!(f.rank(), 5);
        assert!(f.singular_values.iter().all(|&s| (s - 1.0).abs() < 1e-15));
    }

    #[test]
    fn random_tall_and_wide() {
        for (n, d, seed) in [(50, 30, 1), (30, 50, 2), (40, 40, 3)] {
            let a = random_matrix(n, d, seed);
            let f = svd_small(&a).unwrap();
            assert_eq!(f.rank(), n.min(d));
            check_invariants(&a, &f);
        }
    }

    #[test]
    fn rank_deficient() {
        // third column = first + second
        let rows: Vec<[f64; 3]> = (0..6)
            .map(|i| {
                let x = i as f64;
                [x, 1.0 - x * x, x + 1.0 - x * x]
            })
            .collect();
        let a = DesignMatrix::from_rows(&rows).unwrap();
        let f = svd_small(&a).unwrap();
        assert_eq!(f.rank(), 2);
        check_invariants(&a, &f);
    }

    #[test]
    fn zero_matrix_is_rank_zero() {
        let a = DesignMatrix::from_dense(2, 2, vec![0.0; 4]).unwrap();
        assert!(matches!(svd_small(&a), Err(Error::RankZero)));
    }

    #[test]
    fn sparse_input() {
        let a = random_matrix(20, 10, 9).to_csr();
        let f = svd_small(&a).unwrap();
        check_invariants(&a, &f);
    }

    #[test]
    fn projection_examples() {
        let f = svd_small(&DesignMatrix::diag(&[2.0, 0.5]).unwrap()).unwrap();
        assert_eq!(
            exact_projection(&f, 1.0, &[3.0, 4.0]).unwrap(),
            vec![3.0, 0.0]
        );
        assert_eq!(
            exact_projection(&f, 5.0, &[3.0, 4.0]).unwrap(),
            vec![0.0, 0.0]
        );
        assert_eq!(
            exact_projection(&f, 0.25, &[3.0, 4.0]).unwrap(),
            vec![3.0, 4.0]
        );
    }

    #[test]
    fn pcr_examples() {
        let f = svd_small(&DesignMatrix::diag(&[2.0, 0.5]).unwrap()).unwrap();
        assert_eq!(exact_pcr(&f, 1.0, &[4.0, 1.0]).unwrap(), vec![2.0, 0.0]);
        assert_eq!(exact_pcr(&f, 5.0, &[4.0, 1.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(exact_pcr(&f, 1.0, &[0.0, 7.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn projection_is_idempotent_and_orthogonal() {
        let a = random_matrix(30, 20, 4);
        let f = svd_small(&a).unwrap();
        let lambda = f.singular_values[8].powi(2);
        let y: Vec<f64> = (0..20).map(|i| (i as f64).sin()).collect();
        let p = exact_projection(&f, lambda, &y).unwrap();
        let pp = exact_projection(&f, lambda, &p).unwrap();
        assert!(crate::vecops::dist2(&p, &pp) <= 1e-10);
        let resid = crate::vecops::sub(&p, &y);
        let k = f.kept(lambda);
        for v in &f.v[..k] {
            assert!(dot(v, &resid).abs() <= 1e-9);
            assert!((dot(v, &p) - dot(v, &y)).abs() <= 1e-9);
        }
    }

    #[test]
    fn pcr_minimizes_truncated_residual() {
        let a = random_matrix(12, 6, 5);
        let f = svd_small(&a).unwrap();
        let lambda = f.singular_values[2].powi(2) * 0.99;
        let b: Vec<f64> = (0..12).map(|i| (i as f64 * 0.7).cos()).collect();
        let x = exact_pcr(&f, lambda, &b).unwrap();
        let k = f.kept(lambda);
        // A_λ x = U_k Σ_k V_kᵀ x
        let residual = |x: &[f64]| -> f64 {
            let mut ax = vec![0.0; 12];
            for ((u, v), &s) in f.u[..k].iter().zip(&f.v[..k]).zip(&f.singular_values[..k]) {
                axpy(s * dot(v, x), u, &mut ax);
            }
            crate::vecops::dist2(&ax, &b)
        };
        let base = residual(&x);
        for i in 0..6 {
            for eps in [1e-3, -1e-3] {
                let mut xp = x.clone();
                xp[i] += eps;
                assert!(residual(&xp) >= base - 1e-9);
            }
        }
    }

    #[test]
    fn ridge_helpers_agree() {
        let a = random_matrix(8, 12, 6); // rank 8 < d
        let f = svd_small(&a).unwrap();
        let lambda = 0.3;
        let y: Vec<f64> = (0..12).map(|i| 1.0 + i as f64).collect();
        let x = ridge_exact(&f, lambda, &y).unwrap();
        // M x = y
        let mut mx = crate::matrix::gram_apply(&a, &x).unwrap();
        axpy(lambda, &x, &mut mx);
        assert!(crate::vecops::dist2(&mx, &y) <= 1e-10 * crate::vecops::norm2(&y));
        // ‖x‖_M² = yᵀ M⁻¹ y = ‖y‖_{M⁻¹}²
        let e = ridge_energy_norm(&f, lambda, &x);
        let dual = ridge_dual_norm(&f, lambda, &y);
        assert!((e - dual).abs() <= 1e-10 * dual);
    }
}
