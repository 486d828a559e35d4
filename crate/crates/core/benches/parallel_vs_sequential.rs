use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use halfhc_core::matcher::dyadic_search_with;
use halfhc_core::perm_opt::solve_exhaustive_with;
use halfhc_core::synth::{fair_bits, Rng};
use halfhc_core::{ChannelSpec, Execution};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn exhaustive(c: &mut Criterion) {
    let mut rng = Rng::seed(11);
    let a: Vec<f64> = (0..18).map(|_| -rng.uniform()).collect();
    let b = 0.37;
    let mut group = c.benchmark_group("exhaustive_m18");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| solve_exhaustive_with(black_box(&a), b, exec).unwrap())
        });
    }
    group.finish();
}

fn dyadic(c: &mut Criterion) {
    let spec = ChannelSpec::reference();
    let mut group = c.benchmark_group("dyadic_search_d10");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| dyadic_search_with(black_box(&spec), 10, exec).unwrap())
        });
    }
    group.finish();
}

fn count_ones(c: &mut Criterion) {
    let bits = fair_bits(&mut Rng::seed(12), 1 << 24);
    let mut group = c.benchmark_group("count_ones_16M");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| black_box(&bits).count_ones_with(exec))
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = exhaustive, dyadic, count_ones
}
criterion_main!(benches);
