#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use ridgeproj::DesignMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// Gaussian matrix with roughly `density` of its entries kept.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, d: usize, density: f64) -> DesignMatrix {
    let values: Vec<f64> = (0..n * d)
        .map(|_| {
            if rng.random::<f64>() < density {
                rng.sample(StandardNormal)
            } else {
                0.0
            }
        })
        .collect();
    DesignMatrix::from_dense(n, d, values).unwrap()
}

pub fn to_nalgebra(a: &DesignMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.n_rows(), a.n_cols(), &a.to_dense_values())
}

/// Orthonormal `d × d` basis, one `Vec` per column.
pub fn random_basis(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
    let g = DMatrix::from_vec(d, d, gaussian(rng, d * d));
    let q = g.qr().q();
    (0..d)
        .map(|j| q.column(j).iter().copied().collect())
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
