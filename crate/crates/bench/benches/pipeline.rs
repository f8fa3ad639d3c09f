use criterion::{criterion_group, criterion_main, Criterion};

use liegrade::counterexample::{build_l, build_operators, run_full_report};
use liegrade::{
    associative_closure, bfs_oracle, check_axioms, decide, lie_closure, relation_set,
    verify_grading,
};

fn closures(c: &mut Criterion) {
    let ops = build_operators();
    c.bench_function("associative_closure", |b| {
        b.iter(|| associative_closure(&ops).unwrap())
    });
    c.bench_function("lie_closure", |b| b.iter(|| lie_closure(&ops).unwrap()));
}

fn algebra(c: &mut Criterion) {
    let built = build_l();
    c.bench_function("check_axioms_L", |b| b.iter(|| check_axioms(&built.l)));
    c.bench_function("verify_grading_L", |b| {
        b.iter(|| verify_grading(&built.grading))
    });
}

fn semigroup(c: &mut Criterion) {
    let r = relation_set(&build_l().grading).unwrap();
    c.bench_function("decide_counterexample", |b| b.iter(|| decide(&r).unwrap()));
    c.bench_function("oracle_counterexample_degree_4", |b| {
        b.iter(|| bfs_oracle(&r, 4, 10_000_000).unwrap())
    });
}

fn report(c: &mut Criterion) {
    let mut group = c.benchmark_group("report");
    group.sample_size(10);
    group.bench_function("run_full_report", |b| b.iter(run_full_report));
    group.finish();
}

criterion_group!(benches, closures, algebra, semigroup, report);
criterion_main!(benches);
