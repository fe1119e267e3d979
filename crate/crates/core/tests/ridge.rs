mod common;

use common::{gaussian, max_abs_diff, random_matrix, rng};
use proptest::prelude::*;
use ridgeproj::svd::{ridge_dual_norm, ridge_energy_norm, ridge_exact};
use ridgeproj::vecops::sub;
use ridgeproj::{
    ridge_apply_gram, ridge_solve, ridge_solve_report, svd_small, DesignMatrix, Error, MatrixStats,
    RidgeParams,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn meets_energy_norm_contract(
        seed in any::<u64>(),
        n in 1usize..40,
        d in 1usize..30,
        log_lambda in -3.0f64..1.0,
        eps_exp in 1i32..11,
        sparse in any::<bool>(),
    ) {
        let mut r = rng(seed);
        let mut a = random_matrix(&mut r, n, d, 0.6);
        prop_assume!(!a.is_zero());
        if sparse {
            a = a.to_csr();
        }
        let lambda = 10f64.powf(log_lambda);
        let eps = 10f64.powi(-eps_exp);
        let y = gaussian(&mut r, d);
        let stats = MatrixStats::new(&a, lambda, seed).unwrap();
        let params = RidgeParams::new(lambda, eps);
        let report = ridge_solve_report(&a, &params, &y, &stats).unwrap();
        prop_assert!(report.residual <= report.threshold);
        prop_assert!(report.iterations <= params.default_max_iters(&stats));
        let f = svd_small(&a).unwrap();
        let exact = ridge_exact(&f, lambda, &y).unwrap();
        let err = ridge_energy_norm(&f, lambda, &sub(&report.x, &exact));
        prop_assert!(err <= eps * ridge_dual_norm(&f, lambda, &y));
    }
}

#[test]
fn zero_rhs_takes_no_iterations() {
    let a = DesignMatrix::diag(&[3.0, 1.0]).unwrap();
    let stats = MatrixStats::new(&a, 0.5, 0).unwrap();
    let r = ridge_solve_report(&a, &RidgeParams::new(0.5, 1e-8), &[0.0, 0.0], &stats).unwrap();
    assert_eq!(r.x, vec![0.0, 0.0]);
    assert_eq!(r.iterations, 0);
}

#[test]
fn diagonal_solution_is_exact() {
    // (σ² + λ)⁻¹ per coordinate: diag(2, 1), λ = 1 gives 1/5 and 1/2
    let a = DesignMatrix::diag(&[2.0, 1.0]).unwrap();
    let stats = MatrixStats::new(&a, 1.0, 0).unwrap();
    let x = ridge_solve(&a, &RidgeParams::new(1.0, 1e-12), &[1.0, 1.0], &stats).unwrap();
    assert!(max_abs_diff(&x, &[0.2, 0.5]) <= 1e-12);
    let b = ridge_apply_gram(&a, &RidgeParams::new(1.0, 1e-12), &[1.0, 1.0], &stats).unwrap();
    assert!(max_abs_diff(&b, &[0.8, 0.5]) <= 1e-12);
}

#[test]
fn iteration_cap_reports_non_convergence() {
    let mut r = rng(11);
    let a = random_matrix(&mut r, 50, 40, 1.0);
    let y = gaussian(&mut r, 40);
    let stats = MatrixStats::new(&a, 1e-3, 0).unwrap();
    let params = RidgeParams {
        max_iters: Some(2),
        ..RidgeParams::new(1e-3, 1e-10)
    };
    let err = ridge_solve(&a, &params, &y, &stats).unwrap_err();
    match &err {
        Error::RidgeNotConverged {
            iterations,
            residual,
            threshold,
        } => {
            assert_eq!(*iterations, 2);
            assert!(residual > threshold);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(err.is_numerical());
}

#[test]
fn rejects_bad_input() {
    let a = DesignMatrix::identity(3);
    let stats = MatrixStats::new(&a, 1.0, 0).unwrap();
    let ok = RidgeParams::new(1.0, 1e-6);
    assert!(matches!(
        ridge_solve(&a, &ok, &[1.0, 2.0], &stats),
        Err(Error::DimensionMismatch { .. })
    ));
    assert!(matches!(
        ridge_solve(&a, &ok, &[1.0, f64::NAN, 0.0], &stats),
        Err(Error::NonFinite(_))
    ));
    for bad in [
        RidgeParams::new(0.0, 1e-6),
        RidgeParams::new(1.0, 1.0),
        RidgeParams { delta: 0.0, ..ok },
    ] {
        let err = ridge_solve(&a, &bad, &[1.0, 2.0, 3.0], &stats).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(!err.is_numerical());
    }
}

#[test]
fn dense_and_sparse_agree() {
    let mut r = rng(5);
    let a = random_matrix(&mut r, 60, 25, 0.2);
    let y = gaussian(&mut r, 25);
    let stats = MatrixStats::new(&a, 0.1, 0).unwrap();
    let p = RidgeParams::new(0.1, 1e-10);
    let x1 = ridge_solve(&a, &p, &y, &stats).unwrap();
    let x2 = ridge_solve(&a.to_csr(), &p, &y, &stats).unwrap();
    assert!(max_abs_diff(&x1, &x2) <= 1e-8);
}
