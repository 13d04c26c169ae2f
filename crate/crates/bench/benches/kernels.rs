//! Criterion benchmarks for the numerical kernels that dominate sweep
//! runtime: Weber evaluation, Pfaffians, heat-bath sweeps, Trotter steps,
//! and the polylogarithm.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use num_complex::Complex64;
use std::hint::black_box;

fn bench_weber(c: &mut Criterion) {
    let ray = Complex64::from_polar(1.0, 3.0 * std::f64::consts::FRAC_PI_4);
    c.bench_function("weber_d_pair order 4i |z| 8", |b| {
        b.iter(|| {
            kzh_core::specfun::weber_d_pair(black_box(Complex64::new(0.0, 4.0)), black_box(ray * 8.0)).unwrap()
        })
    });
    c.bench_function("lz_mode tau_q 2^20", |b| {
        b.iter(|| kzh_core::freefermion::lz::lz_mode(black_box(1048576.0), 0.001, 0.0005, 0.1, 512.0).unwrap())
    });
}

fn bench_pfaffian(c: &mut Criterion) {
    let n = 64;
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = Complex64::new(
                ((i * 31 + j * 17) % 100) as f64 / 100.0 - 0.5,
                ((i * 7 + j) % 50) as f64 / 100.0,
            );
            m[i * n + j] = v;
            m[j * n + i] = -v;
        }
    }
    c.bench_function("pfaffian 64x64", |b| {
        b.iter_batched(
            || m.clone(),
            |mm| kzh_core::freefermion::pfaffian_skew(black_box(mm), n),
            BatchSize::SmallInput,
        )
    });
}

fn bench_glauber(c: &mut Criterion) {
    let mut lat = kzh_core::glauber2d::SpinLattice::random(256, 7).unwrap();
    c.bench_function("glauber sweep 256x256", |b| b.iter(|| lat.glauber_sweep(black_box(0.4))));
    let lat2 = kzh_core::glauber2d::SpinLattice::random(256, 9).unwrap();
    c.bench_function("measure 256x256 rmax 32", |b| {
        b.iter(|| kzh_core::glauber2d::measure(black_box(&lat2), 0.0, 0.4, 32).unwrap())
    });
}

fn bench_trotter(c: &mut Criterion) {
    let d = kzh_core::randomising::DisorderRealization::sample(128, 3).unwrap();
    let sp = kzh_core::randomising::static_spectrum(&d, -2.0);
    let state0 = kzh_core::randomising::ModeMatrices::from_static(&sp, -8.0);
    c.bench_function("trotter step 128 sites", |b| {
        b.iter_batched(
            || state0.clone(),
            |mut s| kzh_core::randomising::trotter_step(&mut s, black_box(&d), 4.0, 0.01),
            BatchSize::SmallInput,
        )
    });
}

fn bench_polylog(c: &mut Criterion) {
    let eval = kzh_core::specfun::PolylogEval::new(1.5).unwrap();
    c.bench_function("polylog alpha 3/2", |b| b.iter(|| eval.eval(black_box(0.37)).unwrap()));
}

criterion_group!(benches, bench_weber, bench_pfaffian, bench_glauber, bench_trotter, bench_polylog);
criterion_main!(benches);
