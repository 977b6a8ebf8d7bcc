use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use warpcone_core::graphs::random_connected_graph;
use warpcone_core::{spectral_gap, LevelGraph, SpectralMode};

fn gaps(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral_gap");
    group.sample_size(10);
    for n in [200usize, 1000] {
        let g = random_connected_graph(n, 8.0 / n as f64, 1);
        for mode in [SpectralMode::Dense, SpectralMode::Iterative] {
            group.bench_with_input(BenchmarkId::new(format!("{mode:?}"), n), &g, |b, g| {
                b.iter(|| spectral_gap(g, mode, 1e-9).unwrap().value)
            });
        }
    }
    let cycle = LevelGraph::cycle(2000);
    group.bench_function("Iterative/cycle_2000", |b| {
        b.iter(|| spectral_gap(&cycle, SpectralMode::Iterative, 1e-9).unwrap().value)
    });
    group.finish();
}

criterion_group!(benches, gaps);
criterion_main!(benches);
