//! Sequential versus parallel raster on a small reference grid.

use criterion::{criterion_group, criterion_main, Criterion};
use rg_flow::{
    grid_thresholds, linspace, raster_sequential, BareOptions, FlowParams, DEFAULT_LOWER,
    DEFAULT_UPPER_FACTOR,
};

fn bench_raster(c: &mut Criterion) {
    let n = 5;
    let gs = linspace(0.05, 1.5, 10);
    let lambdas = linspace(0.2, 2.5, 10);
    let thresholds = grid_thresholds(
        n,
        &gs,
        &lambdas,
        &BareOptions::default(),
        DEFAULT_LOWER,
        DEFAULT_UPPER_FACTOR,
    )
    .expect("grid thresholds");
    let params = FlowParams::default();

    let mut group = c.benchmark_group("raster_10x10");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| raster_sequential(n, &gs, &lambdas, &thresholds, &params).unwrap())
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| {
        b.iter(|| rg_flow::raster(n, &gs, &lambdas, &thresholds, &params).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_raster);
criterion_main!(benches);
