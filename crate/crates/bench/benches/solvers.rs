use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hatguess::solver::{decide_solvable_with, Branching};
use hatguess::*;

fn graph(spec: GraphSpec) -> SightGraph {
    build_graph(&spec).unwrap()
}

fn verify(c: &mut Criterion) {
    let k = complete_graph_strategy(6).unwrap();
    c.bench_function("verify_wins K6 q=6", |b| {
        b.iter(|| verify_wins(&k.graph, &k.strategy, 6, Budget::unlimited()).unwrap())
    });
    c.bench_function("verify_wins_par K6 q=6", |b| {
        b.iter(|| verify_wins_par(&k.graph, &k.strategy, 6, Budget::unlimited(), 4).unwrap())
    });
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("decide_solvable");
    group.sample_size(10);
    for (name, g, q) in [
        ("path4 q=3", graph(GraphSpec::Path(4)), 3),
        ("star3 q=3", graph(GraphSpec::Star(3)), 3),
        ("C4 q=3", graph(GraphSpec::Cycle(4)), 3),
    ] {
        for branching in [Branching::Lex, Branching::FewestOptions] {
            group.bench_function(format!("{name} {branching:?}"), |b| {
                b.iter(|| decide_solvable_with(black_box(&g), q, Budget::unlimited(), branching).unwrap())
            });
        }
    }
    group.finish();
}

fn linear(c: &mut Criterion) {
    let mut group = c.benchmark_group("decide_linear_solvable");
    group.sample_size(10);
    let f3 = FieldSpec::new(3).unwrap();
    let f4 = FieldSpec::new(4).unwrap();
    let c5 = graph(GraphSpec::Cycle(5));
    let k22 = graph(GraphSpec::CompleteMultipartite(vec![2, 2]));
    group.bench_function("C5 F3", |b| {
        b.iter(|| decide_linear_solvable(&c5, &f3, Budget::unlimited(), 1).unwrap())
    });
    group.bench_function("K22 F4", |b| {
        b.iter(|| decide_linear_solvable(&k22, &f4, Budget::unlimited(), 1).unwrap())
    });
    group.finish();
}

fn saturation(c: &mut Criterion) {
    let rows = match search_saturated(8, 9, 3, 3, Budget::unlimited()).unwrap() {
        SearchOutcome::Found(m) => m.into_rows(),
        other => panic!("no matrix: {other:?}"),
    };
    c.bench_function("is_t_saturated 9 cols t=3", |b| {
        b.iter(|| is_t_saturated(black_box(&rows), 3, 3).unwrap())
    });
    c.bench_function("random_saturated 4x4 q=2 t=2", |b| {
        b.iter(|| random_saturated(4, 4, 2, 2, black_box(7)).unwrap())
    });
}

criterion_group!(benches, verify, solve, linear, saturation);
criterion_main!(benches);
