use std::hint::black_box;

use covar_medium::dispersion::{dispersion_roots, RootSearchOptions, RootWindow};
use covar_medium::minkowski::pair_contract;
use covar_medium::FourVector;
use covar_medium_bench::{dense_pair_tensor, dielectric_evaluator, lorentzian_evaluator};
use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

fn bench_pair_contract(c: &mut Criterion) {
    let a = dense_pair_tensor(0.1);
    let b = dense_pair_tensor(0.7).scale_complex(Complex64::new(0.5, -0.2));
    c.bench_function("pair_contract", |bench| bench.iter(|| pair_contract(black_box(&a), black_box(&b))));
}

fn bench_chi_momentum(c: &mut Criterion) {
    let e = lorentzian_evaluator();
    let q = FourVector::new(0.1, 0.2, 0.3, 0.9);
    c.bench_function("chi_momentum", |bench| bench.iter(|| e.chi_momentum(black_box(&q))));
}

fn bench_dispersion_roots(c: &mut Criterion) {
    let e = dielectric_evaluator();
    let w = RootWindow::new(1.01, 2.0, -0.3, 0.3).expect("window");
    let opts = RootSearchOptions::default();
    let mut group = c.benchmark_group("dispersion");
    group.sample_size(10);
    group.bench_function("dispersion_roots", |bench| {
        bench.iter(|| dispersion_roots(&e, [0.0, 0.0, 1.0], black_box(0.5), &w, &opts))
    });
    group.finish();
}

criterion_group!(kernels, bench_pair_contract, bench_chi_momentum, bench_dispersion_roots);
criterion_main!(kernels);
