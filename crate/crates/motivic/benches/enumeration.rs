//! Parallel vs sequential throughput of the brute-force oracle.
//!
//! `threads = 1` routes through the sequential kernel; the default budget
//! uses the rayon pool. Counts must agree bit for bit, which the bench
//! asserts before timing.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use motivic::counting::{
    count_contact_locus, count_jets, count_points, AffineSchemeSpec, ContactOrders,
    EnumerationBudget, Polynomial,
};

fn node_threefold() -> AffineSchemeSpec {
    AffineSchemeSpec::new(
        4,
        vec![Polynomial::new(
            4,
            vec![(1, vec![1, 1, 0, 0]), (-1, vec![0, 0, 1, 1])],
        )],
        vec![],
    )
}

fn hyperbola() -> AffineSchemeSpec {
    AffineSchemeSpec::new(
        2,
        vec![Polynomial::new(2, vec![(1, vec![1, 1]), (-1, vec![0, 0])])],
        vec![],
    )
}

const SEQUENTIAL: EnumerationBudget = EnumerationBudget {
    max_states: u64::MAX,
    threads: 1,
};
const PARALLEL: EnumerationBudget = EnumerationBudget {
    max_states: u64::MAX,
    threads: 0,
};

fn bench_points(c: &mut Criterion) {
    let spec = node_threefold();
    let mut group = c.benchmark_group("count_points/node-threefold");
    for q in [31u32, 53] {
        let seq = count_points(&spec, q, &SEQUENTIAL).unwrap();
        let par = count_points(&spec, q, &PARALLEL).unwrap();
        assert_eq!(seq, par);
        group.bench_with_input(BenchmarkId::new("sequential", q), &q, |b, &q| {
            b.iter(|| count_points(black_box(&spec), q, &SEQUENTIAL).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("parallel", q), &q, |b, &q| {
            b.iter(|| count_points(black_box(&spec), q, &PARALLEL).unwrap())
        });
    }
    group.finish();
}

fn bench_jets(c: &mut Criterion) {
    let spec = hyperbola();
    let mut group = c.benchmark_group("count_jets/hyperbola");
    for (q, m) in [(5u32, 3u32), (7, 3)] {
        let seq = count_jets(&spec, q, m, &SEQUENTIAL).unwrap();
        let par = count_jets(&spec, q, m, &PARALLEL).unwrap();
        assert_eq!(seq, par);
        let id = format!("q{q}-m{m}");
        group.bench_with_input(BenchmarkId::new("sequential", &id), &(q, m), |b, &(q, m)| {
            b.iter(|| count_jets(black_box(&spec), q, m, &SEQUENTIAL).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("parallel", &id), &(q, m), |b, &(q, m)| {
            b.iter(|| count_jets(black_box(&spec), q, m, &PARALLEL).unwrap())
        });
    }
    group.finish();
}

fn bench_contact(c: &mut Criterion) {
    let divisor = [
        (Polynomial::new(2, vec![(1, vec![1, 0])]), 1u32),
        (Polynomial::new(2, vec![(1, vec![0, 1])]), 1u32),
    ];
    let orders = ContactOrders::Exact(vec![1, 1]);
    let mut group = c.benchmark_group("count_contact_locus/a2-axes");
    let (q, m) = (5u32, 3u32);
    let seq = count_contact_locus(2, &divisor, q, m, &orders, &SEQUENTIAL).unwrap();
    let par = count_contact_locus(2, &divisor, q, m, &orders, &PARALLEL).unwrap();
    assert_eq!(seq, par);
    group.bench_function("sequential", |b| {
        b.iter(|| count_contact_locus(2, black_box(&divisor), q, m, &orders, &SEQUENTIAL).unwrap())
    });
    group.bench_function("parallel", |b| {
        b.iter(|| count_contact_locus(2, black_box(&divisor), q, m, &orders, &PARALLEL).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_points, bench_jets, bench_contact);
criterion_main!(benches);
