use std::hint::black_box;

use centrefall::tdse::*;
use centrefall::*;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn state(n: usize) -> RadialGridState {
    let ts = TrialState::new(1.0, 1.0, 0).unwrap();
    let grid = GridSpec::new(n, 12.0, 2e-4).unwrap();
    discretize(InitialState::trial(ts), grid, 1.0, 1.0, UnitSystem::Natural).unwrap()
}

fn cn_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("cn_step");
    for n in [1024, 4096, 16384] {
        let mut st = state(n);
        let mut prop = Propagator::new(&st).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| prop.step(black_box(&mut st)).unwrap())
        });
    }
    group.finish();
}

fn factor_and_observe(c: &mut Criterion) {
    let st = state(4096);
    c.bench_function("propagator_new_4096", |b| b.iter(|| Propagator::new(black_box(&st)).unwrap()));
    c.bench_function("observables_4096", |b| b.iter(|| observables(black_box(&st))));
}

fn short_verification(c: &mut Criterion) {
    let st = state(4096);
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    group.bench_function("psi1_gamma1_t0.2", |b| {
        b.iter(|| propagate_and_verify(black_box(&st), 0.2, 10).unwrap().max_rel_dev)
    });
    group.finish();
}

criterion_group!(benches, cn_step, factor_and_observe, short_verification);
criterion_main!(benches);
