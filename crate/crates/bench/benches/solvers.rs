use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ridgeproj::poly::{compressed_sign_poly, p_k_eval};
use ridgeproj::{pc_proj, pc_regress, ridge_solve, PcrConfig, ProjectionConfig, RidgeParams};
use ridgeproj_bench::{fixture, sparse_fixture};

fn ridge(c: &mut Criterion) {
    let mut group = c.benchmark_group("ridge_solve");
    for (label, f) in [
        ("dense", fixture(120, 80, 20, 0.1, 1)),
        ("csr", sparse_fixture(120, 80, 20, 0.1, 1)),
    ] {
        for eps in [1e-4, 1e-10] {
            let params = RidgeParams::new(f.problem.lambda, eps);
            group.bench_with_input(BenchmarkId::new(label, eps), &eps, |b, _| {
                b.iter(|| ridge_solve(&f.problem.a, &params, black_box(&f.atb), &f.stats).unwrap())
            });
        }
    }
    group.finish();
}

fn solvers(c: &mut Criterion) {
    let f = fixture(120, 80, 20, 0.2, 2);
    let gamma = f.problem.projection_gamma();
    let mut group = c.benchmark_group("solvers");
    group.sample_size(10);
    let cfg = ProjectionConfig::new(f.problem.lambda, gamma, 1e-3);
    group.bench_function("pc_proj", |b| {
        b.iter(|| pc_proj(&f.problem.a, &cfg, black_box(&f.atb), &f.stats).unwrap())
    });
    let cfg = PcrConfig::new(f.problem.lambda, gamma, 1e-3);
    group.bench_function("pc_regress", |b| {
        b.iter(|| pc_regress(&f.problem.a, &cfg, black_box(&f.problem.b), &f.stats).unwrap())
    });
    group.finish();
}

fn polynomials(c: &mut Criterion) {
    let mut group = c.benchmark_group("sign_poly");
    for k in [16, 256, 4096] {
        group.bench_with_input(BenchmarkId::new("p_k_eval", k), &k, |b, &k| {
            b.iter(|| p_k_eval(black_box(0.37), k).unwrap())
        });
    }
    let q = compressed_sign_poly(0.25, 0.1).unwrap();
    group.bench_function("compressed_eval", |b| b.iter(|| q.eval(black_box(0.37))));
    group.finish();
}

criterion_group!(benches, ridge, solvers, polynomials);
criterion_main!(benches);
