use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use glsim_core::{
    bump_field, discrete_ops::laplacian_apply, linsolve::thomas_solve,
    linsolve::TridiagonalSystem, BcVariant, ModelParams, RadialGrid, SchemeConfig, Stepper,
};
use num_complex::Complex64 as C64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn random_tridiag(n: usize, seed: u64) -> (TridiagonalSystem, Vec<C64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = |lo: f64| C64::new(rng.gen_range(lo..lo + 1.0), rng.gen_range(-0.5..0.5));
    let lower: Vec<C64> = (0..n - 1).map(|_| z(-0.5)).collect();
    let upper: Vec<C64> = (0..n - 1).map(|_| z(-0.5)).collect();
    let diag: Vec<C64> = (0..n).map(|_| z(4.0)).collect();
    let rhs: Vec<C64> = (0..n).map(|_| z(-0.5)).collect();
    (TridiagonalSystem::new(lower, diag, upper), rhs)
}

fn bench_thomas(c: &mut Criterion) {
    let mut group = c.benchmark_group("thomas_solve");
    for &n in &[64usize, 256, 1024] {
        let (sys, rhs) = random_tridiag(n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| thomas_solve(&sys, &rhs).unwrap())
        });
    }
    group.finish();
}

fn bench_laplacian(c: &mut Criterion) {
    let mut group = c.benchmark_group("laplacian_apply");
    for &m in &[256usize, 1024] {
        let grid = RadialGrid::build(2, 0.5, 1.5, m).unwrap();
        let u = bump_field(&grid, 1.0, 0.5, 0.3);
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, _| {
            b.iter(|| laplacian_apply(&u, &grid))
        });
    }
    group.finish();
}

fn bench_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("cn_step");
    let params = ModelParams {
        lambda: 1.0,
        alpha: 1.0,
        kappa: 1.0,
        beta: 1.0,
        gamma: 0.0,
        p: 3.0,
        dim: 2,
    };
    for &m in &[256usize, 1024] {
        let grid = RadialGrid::build(2, 0.5, 1.5, m).unwrap();
        let scheme = SchemeConfig::new(BcVariant::Dynamic, 1e-3, 1.0);
        let u = bump_field(&grid, 1.0, 0.5, 0.3);
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, _| {
            let mut stepper = Stepper::new(&grid, params, scheme.clone());
            b.iter(|| stepper.step(&u, 0.0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_thomas, bench_laplacian, bench_step);
criterion_main!(benches);
