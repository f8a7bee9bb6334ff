use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fptprop::interval::{lift_to_dc, SumBc};
use fptprop::{Config, Kind, ProblemState};
use fptprop_bench::fixture;

fn prune(state: &ProblemState, config: &Config) {
    black_box(
        state.constraints()[0]
            .prune(black_box(state), config)
            .unwrap(),
    );
}

fn nvalue_n(c: &mut Criterion) {
    let config = Config::default();
    let mut group = c.benchmark_group("nvalue_n");
    for n in [100, 200, 400, 800] {
        let state = fixture(Kind::NValue, n, 4, 4);
        group.bench_with_input(BenchmarkId::from_parameter(n), &state, |b, s| {
            b.iter(|| prune(s, &config))
        });
    }
    group.finish();
}

fn nvalue_k(c: &mut Criterion) {
    let config = Config::default();
    let mut group = c.benchmark_group("nvalue_k");
    for k in 5..=10 {
        let state = fixture(Kind::NValue, 200, 4, k);
        group.bench_with_input(BenchmarkId::from_parameter(k), &state, |b, s| {
            b.iter(|| prune(s, &config))
        });
    }
    group.finish();
}

fn backdoor(c: &mut Criterion) {
    let config = Config::default();
    let mut group = c.benchmark_group("backdoor");
    for kind in [Kind::Disjoint, Kind::AmongSet, Kind::Roots] {
        for k in [2, 4, 6] {
            let state = fixture(kind, 20, 6, k);
            group.bench_with_input(BenchmarkId::new(kind.to_string(), k), &state, |b, s| {
                b.iter(|| prune(s, &config))
            });
        }
    }
    group.finish();
}

fn sum_lifting(c: &mut Criterion) {
    let cap = Config::default().run_product_cap;
    let mut group = c.benchmark_group("sum_lifting");
    for n in [3, 5, 7] {
        let state = fixture(Kind::SumEq, n, 8, 1);
        let scope = state.constraints()[0].scope(&state).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &state, |b, s| {
            b.iter(|| black_box(lift_to_dc(&SumBc, black_box(s), &scope, cap).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, nvalue_n, nvalue_k, backdoor, sum_lifting);
criterion_main!(benches);
