use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use tpwave_bench::{cube, periodic_forcing, unit_params};
use tpwave_core::kuznetsov::{nonlinearity, solve_kuznetsov};
use tpwave_core::linear::{solve_box, LinearOptions};
use tpwave_core::norms::sols_norm;
use tpwave_core::symbols::{marcinkiewicz_check, CutoffSpec, SampleSpec, SymbolParams};
use tpwave_core::{forward_transform, Dealias, FixedPointConfig, ProblemSpec};

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("forward_transform");
    for n in [16, 32] {
        let f = periodic_forcing(cube(n), 1.0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| b.iter(|| forward_transform(black_box(f))));
    }
    group.finish();
}

fn linear(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_box");
    group.sample_size(10);
    for n in [16, 32] {
        let f = periodic_forcing(cube(n), 1.0);
        let p = unit_params();
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| solve_box(&f.map(|v| v), &p, &LinearOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn nonlinear(c: &mut Criterion) {
    let u = periodic_forcing(cube(16), 1e-2);
    c.bench_function("nonlinearity/16", |b| b.iter(|| nonlinearity(&u.map(|v| v), 1.0, Dealias::TwoThirds)));
    c.bench_function("sols_norm/16", |b| b.iter(|| sols_norm(&u.map(|v| v), 2.75)));

    let spec = ProblemSpec::periodic_box(unit_params(), periodic_forcing(cube(16), 1e-3));
    let mut group = c.benchmark_group("solve_kuznetsov");
    group.sample_size(10);
    group.bench_function("16", |b| b.iter(|| solve_kuznetsov(&spec, &FixedPointConfig::default()).unwrap()));
    group.finish();
}

fn multiplier(c: &mut Criterion) {
    let p = SymbolParams::new(1.0, 2.0 * std::f64::consts::PI).unwrap();
    let cut = CutoffSpec::for_period(p.period);
    let sample = SampleSpec { decades: 2.0, eta_points: 41, band_points: 31, xi_points: 11 };
    let mut group = c.benchmark_group("marcinkiewicz_check");
    group.sample_size(10);
    group.bench_function("small", |b| b.iter(|| marcinkiewicz_check(&p, &cut, &sample).unwrap()));
    group.finish();
}

criterion_group!(benches, transforms, linear, nonlinear, multiplier);
criterion_main!(benches);
