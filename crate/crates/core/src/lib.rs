//! Principal component projection and regression through ridge regression.
//!
//! The solvers never form an eigendecomposition. They sharpen the smooth
//! projection `(AᵀA + λI)⁻¹AᵀA` into a step function with a polynomial
//! recurrence whose only matrix access is a ridge solve.
//!
//! ```
//! use ridgeproj::{pc_proj, DesignMatrix, MatrixStats, ProjectionConfig};
//!
//! let a = DesignMatrix::diag(&[2.0, 0.5]).unwrap();
//! let stats = MatrixStats::new(&a, 1.0, 0).unwrap();
//! let cfg = ProjectionConfig::new(1.0, 0.2, 1e-6);
//! let s = pc_proj(&a, &cfg, &[3.0, 4.0], &stats).unwrap();
//! assert!((s[0] - 3.0).abs() < 1e-5 && s[1].abs() < 1e-5);
//! ```

pub mod error;
pub mod experiment;
pub mod io;
pub mod matrix;
pub mod operator;
pub mod pcr;
pub mod poly;
pub mod projection;
pub mod ridge;
pub mod spectral;
pub mod step;
pub mod svd;
pub mod synth;
pub mod trace;
pub mod vecops;

pub use error::{Error, Result};
pub use experiment::{run_convergence, run_convergence_on};
pub use matrix::{gram_apply, gram_norm, DesignMatrix, Storage};
pub use operator::{DenseSymmetric, FnOperator, Operator, RidgeInverse, SmoothProjection};
pub use pcr::{
    pc_regress, pc_regress_from_projection, pc_regress_trace, truncated_g_series, PcrConfig,
};
pub use poly::{
    chebyshev_monomial_approx, compressed_sign_poly, integral_step_oracle, p_k_eval,
    sign_error_bound, sign_poly_degree, Basis, CompressedPoly, SignPolyDegree,
};
pub use projection::{pc_proj, pc_proj_trace, ProjectionConfig};
pub use ridge::{ridge_apply_gram, ridge_solve, ridge_solve_report, RidgeParams, RidgeReport};
pub use spectral::{spectral_norm_estimate, MatrixStats};
pub use step::{apply_sign_stable, apply_step, IterateState};
pub use svd::{exact_pcr, exact_projection, svd_small, SvdFactors};
pub use synth::{gen_synthetic, SynthConfig, SyntheticProblem};
pub use trace::{ConvergenceTrace, TraceAlgorithm, TraceMetadata, TraceRecord};
