//! Synthetic regression problems with a planted spectral gap around `λ`.
//!
//! Squared singular values are drawn uniformly from `[½(1+γ), 1]` for the top
//! `top_rank` components and from `[0, ½(1−γ)]` for the rest, so with the
//! default `λ = ½` the gap straddles `λ` in the squared domain.
//!
//! Randomness comes from `ChaCha8Rng` seeded with `seed`, with one stream per
//! quantity so changing, say, the noise level leaves `A` untouched:
//! stream 1 draws `U`, 2 draws `V`, 3 the spectrum, 4 `x_true`, 5 the noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::DesignMatrix;
use crate::vecops::{axpy, dot, norm2};

pub const DEFAULT_LAMBDA: f64 = 0.5;
pub const DEFAULT_NOISE: f64 = 0.1;

const STREAM_U: u64 = 1;
const STREAM_V: u64 = 2;
const STREAM_SPECTRUM: u64 = 3;
const STREAM_X: u64 = 4;
const STREAM_NOISE: u64 = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub n: usize,
    pub d: usize,
    pub top_rank: usize,
    pub gamma: f64,
    pub lambda: f64,
    /// `‖noise‖₂ / ‖A·x_true‖₂`.
    pub noise: f64,
    pub seed: u64,
}

impl SynthConfig {
    pub fn new(n: usize, d: usize, top_rank: usize, gamma: f64, seed: u64) -> Self {
        SynthConfig {
            n,
            d,
            top_rank,
            gamma,
            lambda: DEFAULT_LAMBDA,
            noise: DEFAULT_NOISE,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 {
            return Err(Error::Domain(format!(
                "matrix shape must be positive, got {}x{}",
                self.n, self.d
            )));
        }
        if self.top_rank == 0 || self.top_rank >= self.n.min(self.d) {
            return Err(Error::Domain(format!(
                "top rank must lie in [1, min(n, d)), got {} for {}x{}",
                self.top_rank, self.n, self.d
            )));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::Domain(format!(
                "gamma must lie in (0, 1), got {}",
                self.gamma
            )));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Domain(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(Error::Domain(format!(
                "noise level must be non-negative, got {}",
                self.noise
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticProblem {
    pub a: DesignMatrix,
    pub b: Vec<f64>,
    pub x_true: Vec<f64>,
    pub gamma: f64,
    pub lambda: f64,
    pub top_rank: usize,
    pub seed: u64,
    /// Planted singular values, descending.
    pub singular_values: Vec<f64>,
}

impl SyntheticProblem {
    /// Gap parameter to hand the solvers.
    ///
    /// Squared values `≥ ½(1+γ)` and `≤ ½(1−γ)` around `λ = ½` satisfy
    /// `σ²_tail ≤ (1−4γ′)λ` and `(1−4γ′)σ²_top ≥ λ` for
    /// `γ′ = γ/(4(1+γ))`, which is the window the solvers' guarantees
    /// assume.
    pub fn projection_gamma(&self) -> f64 {
        self.gamma / (4.0 * (1.0 + self.gamma))
    }

    pub fn n(&self) -> usize {
        self.a.n_rows()
    }

    pub fn d(&self) -> usize {
        self.a.n_cols()
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// `r` singular values, the top `top_rank` with squares in `[½(1+γ), 1]`,
/// the rest with squares in `[0, ½(1−γ)]`. Descending.
pub fn synthetic_spectrum(r: usize, top_rank: usize, gamma: f64, seed: u64) -> Vec<f64> {
    let mut rng = stream(seed, STREAM_SPECTRUM);
    let hi_lo = 0.5 * (1.0 + gamma);
    let lo_hi = 0.5 * (1.0 - gamma);
    let mut squares: Vec<f64> = (0..r)
        .map(|i| {
            if i < top_rank {
                rng.random_range(hi_lo..=1.0)
            } else {
                rng.random_range(0.0..=lo_hi)
            }
        })
        .collect();
    squares.sort_by(|a, b| b.total_cmp(a));
    squares.into_iter().map(f64::sqrt).collect()
}

/// Orthonormal `rows × cols` basis from a Gaussian matrix, stored as columns.
/// Modified Gram–Schmidt, run twice for orthogonality to working precision.
fn random_orthonormal(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(cols);
    for _ in 0..cols {
        let mut v: Vec<f64> = (0..rows).map(|_| rng.sample(StandardNormal)).collect();
        for _ in 0..2 {
            for u in &q {
                let c = dot(u, &v);
                axpy(-c, u, &mut v);
            }
        }
        let nv = norm2(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        q.push(v);
    }
    q
}

/// Draws a gapped problem: random `U`, `V`, planted spectrum, `x_true`
/// on the top right singular vectors, and `b = A·x_true + noise`.
pub fn gen_synthetic(
    n: usize,
    d: usize,
    top_rank: usize,
    gamma: f64,
    seed: u64,
) -> Result<SyntheticProblem> {
    generate(&SynthConfig::new(n, d, top_rank, gamma, seed))
}

pub fn generate(cfg: &SynthConfig) -> Result<SyntheticProblem> {
    cfg.validate()?;
    let r = cfg.n.min(cfg.d);
    let sv = synthetic_spectrum(r, cfg.top_rank, cfg.gamma, cfg.seed);
    synthesize_with_spectrum(cfg, &sv)
}

/// Same construction with caller-chosen singular values (descending, length
/// `min(n, d)`). `cfg.gamma` is recorded but not enforced.
pub fn synthesize_with_spectrum(
    cfg: &SynthConfig,
    singular_values: &[f64],
) -> Result<SyntheticProblem> {
    cfg.validate()?;
    let (n, d) = (cfg.n, cfg.d);
    let r = n.min(d);
    crate::error::check_len("singular values", r, singular_values.len())?;
    if singular_values
        .iter()
        .any(|s| !(s.is_finite() && *s >= 0.0))
    {
        return Err(Error::Domain(
            "singular values must be finite and non-negative".into(),
        ));
    }
    if singular_values.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Domain(
            "singular values must be in descending order".into(),
        ));
    }
    let u = random_orthonormal(n, r, &mut stream(cfg.seed, STREAM_U));
    let v = random_orthonormal(d, r, &mut stream(cfg.seed, STREAM_V));

    let mut values = vec![0.0; n * d];
    for ((ui, vi), &s) in u.iter().zip(&v).zip(singular_values) {
        for (row, &uij) in ui.iter().enumerate() {
            axpy(s * uij, vi, &mut values[row * d..(row + 1) * d]);
        }
    }
    let a = DesignMatrix::from_dense(n, d, values)?;

    let mut xr = stream(cfg.seed, STREAM_X);
    let mut x_true = vec![0.0; d];
    for vi in &v[..cfg.top_rank] {
        let g: f64 = xr.sample(StandardNormal);
        axpy(g, vi, &mut x_true);
    }
    let mut b = a.matvec(&x_true)?;
    if cfg.noise > 0.0 {
        let mut nr = stream(cfg.seed, STREAM_NOISE);
        let xi: Vec<f64> = (0..n).map(|_| nr.sample(StandardNormal)).collect();
        let scale = cfg.noise * norm2(&b) / norm2(&xi);
        axpy(scale, &xi, &mut b);
    }
    Ok(SyntheticProblem {
        a,
        b,
        x_true,
        gamma: cfg.gamma,
        lambda: cfg.lambda,
        top_rank: cfg.top_rank,
        seed: cfg.seed,
        singular_values: singular_values.to_vec(),
    })
}
