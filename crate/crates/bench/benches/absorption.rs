use std::time::Duration;

use absorb_core::enumeration::{enumerate_tables, random_filtered, Filters, GenSpec};
use absorb_core::oracle::OracleBounds;
use absorb_core::{decide_theorem, enumerate_subuniverses, search_absorbing_term, NaryTable};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    for size in [2, 3] {
        g.bench_with_input(BenchmarkId::new("binary", size), &size, |b, &size| {
            b.iter(|| enumerate_tables(&GenSpec::exhaustive(size, 2)).unwrap().tables.len())
        });
    }
    g.bench_function("ternary-2", |b| {
        b.iter(|| enumerate_tables(&GenSpec::exhaustive(2, 3)).unwrap().tables.len())
    });
    let idem = Filters {
        idempotent: true,
        commutative: false,
    };
    g.bench_function("random-idempotent-ternary-3", |b| {
        b.iter(|| random_filtered(3, 3, idem, 20, 11).unwrap().tables.len())
    });
    g.finish();
}

fn pairs(tables: &[NaryTable]) -> Vec<(NaryTable, absorb_core::Subuniverse)> {
    tables
        .iter()
        .flat_map(|t| {
            enumerate_subuniverses(t, true)
                .unwrap()
                .into_iter()
                .map(move |s| (t.clone(), s))
        })
        .collect()
}

fn deciding(c: &mut Criterion) {
    let tables = enumerate_tables(&GenSpec::exhaustive(3, 2)).unwrap().tables;
    let pairs = pairs(&tables);
    let mut g = c.benchmark_group("size-3 corpus");
    g.bench_function("decide_theorem", |b| {
        b.iter(|| pairs.iter().filter(|(t, s)| decide_theorem(t, s).unwrap().absorbs).count())
    });
    g.bench_function("oracle", |b| {
        b.iter(|| {
            pairs
                .iter()
                .filter(|(t, s)| {
                    search_absorbing_term(t, s, &OracleBounds::default_for(t))
                        .unwrap()
                        .found()
                })
                .count()
        })
    });
    g.finish();
}

criterion_group!(
    name = benches;
    config = Criterion::default()
        .warm_up_time(Duration::from_millis(500))
        .measurement_time(Duration::from_secs(2))
        .sample_size(10);
    targets = enumeration, deciding
);
criterion_main!(benches);
