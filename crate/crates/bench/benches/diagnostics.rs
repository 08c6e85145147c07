//! Effective-sample-size estimation cost on chains of realistic length and
//! autocorrelation.

use criterion::{criterion_group, BenchmarkId, Criterion};
use sparsecov::diagnostics::effective_sample_size;
use sparsecov::dist::RngHandle;

fn ar1_chain(n: usize, coeff: f64, seed: u64) -> Vec<f64> {
    let mut rng = RngHandle::new(seed);
    let mut x = 0.0;
    (0..n)
        .map(|_| {
            x = coeff * x + rng.standard_normal();
            x
        })
        .collect()
}

fn bench_ess(c: &mut Criterion) {
    let mut group = c.benchmark_group("ess");
    for coeff in [0.0, 0.5, 0.9] {
        let chain = ar1_chain(5000, coeff, 3);
        group.bench_function(BenchmarkId::new("ar1_n5000", format!("{coeff}")), |b| {
            b.iter(|| effective_sample_size(&chain).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_ess);
