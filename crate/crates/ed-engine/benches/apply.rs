use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ed_engine::{HamOp, TermListOp, C64};
use model_builder::{build, Couplings, LadderSpec, ModelKind};

fn op_for(l: usize) -> TermListOp {
    let spec = LadderSpec::smooth_smooth(3, l).unwrap();
    let c = Couplings::bulk(0.7, 0.9).unwrap();
    let h = build(ModelKind::UnitaryGauge, &spec, &c).unwrap();
    TermListOp::new(&h)
}

fn bench_apply(c: &mut Criterion) {
    let mut group = c.benchmark_group("matvec");
    for l in [3usize, 4] {
        let op = op_for(l);
        let x = vec![C64::new(1.0, -0.5); op.dim()];
        let mut y = vec![C64::new(0.0, 0.0); op.dim()];
        group.bench_with_input(BenchmarkId::new("sequential", op.dim()), &l, |b, _| {
            b.iter(|| op.apply_sequential(&x, &mut y))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", op.dim()), &l, |b, _| {
            b.iter(|| op.apply_parallel(&x, &mut y))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_apply);
criterion_main!(benches);
