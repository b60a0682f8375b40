use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kronlab::characters::CharacterTable;
use kronlab::oracles::{kron_char, pleth_wreath, Method};
use kronlab::projectors::{kron_pipeline, pipeline_trace, pleth_pipeline};
use kronlab::Partition;
use kronlab_bench::{hook, triples};

fn character_tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("character_table");
    for n in [6, 8, 10] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| CharacterTable::compute(n).unwrap()));
    }
    g.finish();
}

fn oracles(c: &mut Criterion) {
    c.bench_function("kron_char sweep n=5", |b| {
        let ts = triples(5);
        b.iter(|| ts.iter().map(|(x, y, z)| kron_char(x, y, z).unwrap().value).sum::<u64>())
    });
    let l: Partition = "4,2,2".parse().unwrap();
    c.bench_function("pleth_wreath (2,4)", |b| b.iter(|| pleth_wreath(2, 4, &l).unwrap()));
}

fn traces(c: &mut Criterion) {
    let mut g = c.benchmark_group("kron_trace");
    g.sample_size(10);
    for n in [3, 4] {
        let p = kron_pipeline(&hook(n), &hook(n), &hook(n)).unwrap();
        g.bench_with_input(BenchmarkId::new("dense", n), &p, |b, p| {
            b.iter(|| pipeline_trace(p, Method::Dense).unwrap())
        });
    }
    for n in [4, 5, 6] {
        let p = kron_pipeline(&hook(n), &hook(n), &hook(n)).unwrap();
        g.bench_with_input(BenchmarkId::new("collapsed", n), &p, |b, p| {
            b.iter(|| pipeline_trace(p, Method::Collapsed).unwrap())
        });
    }
    g.finish();
    let p = pleth_pipeline(2, 3, &"4,2".parse().unwrap()).unwrap();
    c.bench_function("pleth dense (2,3)", |b| b.iter(|| pipeline_trace(&p, Method::Dense).unwrap()));
}

criterion_group!(benches, character_tables, oracles, traces);
criterion_main!(benches);
