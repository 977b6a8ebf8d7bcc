use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;
use warpcone_core::warped::build_warped_graph;
use warpcone_core::{epsilon_net, make_action, ActionSpec, Space, WarpedMetric};

fn exact_queries(c: &mut Criterion) {
    let su2 = make_action(&ActionSpec::GenericSu2 { count: 2, seed: 1 }).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let pairs: Vec<_> = (0..64)
        .map(|_| (su2.space.sample_uniform(&mut rng), su2.space.sample_uniform(&mut rng)))
        .collect();
    let mut group = c.benchmark_group("warped_exact_su2");
    for t in [5.0, 20.0] {
        let m = WarpedMetric::new(&su2, t, 10).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(t), &m, |b, m| {
            b.iter(|| pairs.iter().map(|(x, y)| m.distance(x, y)).sum::<f64>())
        });
    }
    group.finish();
}

fn graph_build(c: &mut Criterion) {
    let circle = make_action(&ActionSpec::Rotation {
        translations: vec![vec![std::f64::consts::SQRT_2 - 1.0]],
    })
    .unwrap();
    let net = epsilon_net(Space::Torus { dim: 1 }, 1.0 / 1000.0, 0).unwrap();
    c.bench_function("warped_graph_circle_1000", |b| {
        b.iter(|| build_warped_graph(&circle, black_box(1000.0), &net).unwrap())
    });
}

criterion_group!(benches, exact_queries, graph_build);
criterion_main!(benches);
