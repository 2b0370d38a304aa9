use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hypernorm::random::{random_symmetric, random_tensor, Sign};
use hypernorm::spectral::{eta_p, spectral_p_norm};
use hypernorm::SolverOptions;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn modes() -> [(&'static str, SolverOptions); 2] {
    let opts = SolverOptions::default().with_starts(64);
    [("parallel", opts.clone()), ("sequential", opts.sequential())]
}

fn norm(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_tensor(&[8, 8, 8], Sign::Mixed, &mut rng);
    let mut group = c.benchmark_group("spectral_p_norm 8x8x8 p=3");
    for (name, opts) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, o| {
            b.iter(|| spectral_p_norm(&a, 3.0, o).unwrap())
        });
    }
    group.finish();
}

fn eta(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = random_symmetric(3, 6, Sign::Mixed, &mut rng);
    let mut group = c.benchmark_group("eta_p r=3 n=6 p=4");
    for (name, opts) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, o| b.iter(|| eta_p(&a, 4.0, o).unwrap()));
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = norm, eta
}
criterion_main!(benches);
