//! Fixtures shared by the benchmarks.

use ridgeproj::synth::gen_synthetic;
use ridgeproj::{MatrixStats, SyntheticProblem};

/// A synthetic problem with its ridge constants precomputed.
pub struct Fixture {
    pub problem: SyntheticProblem,
    pub stats: MatrixStats,
    /// `Aᵀb`, the usual projection input.
    pub atb: Vec<f64>,
}

pub fn fixture(n: usize, d: usize, top_rank: usize, gamma: f64, seed: u64) -> Fixture {
    let problem = gen_synthetic(n, d, top_rank, gamma, seed).expect("valid fixture shape");
    let stats = MatrixStats::new(&problem.a, problem.lambda, 0).expect("nonzero matrix");
    let atb = problem.a.matvec_t(&problem.b).expect("matching lengths");
    Fixture {
        problem,
        stats,
        atb,
    }
}

/// Same problem with `A` stored as CSR.
pub fn sparse_fixture(n: usize, d: usize, top_rank: usize, gamma: f64, seed: u64) -> Fixture {
    let mut f = fixture(n, d, top_rank, gamma, seed);
    f.problem.a = f.problem.a.to_csr();
    f
}
