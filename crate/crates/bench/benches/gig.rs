//! GIG draw throughput in the regimes the samplers hit: large negative
//! order from the column update, order zero from the local shrinkage
//! update at both ends of the b-parameter range.

use criterion::{criterion_group, BenchmarkId, Criterion};
use sparsecov::dist::RngHandle;
use sparsecov::gig::{sample_gig, GigParams};

fn bench_gig(c: &mut Criterion) {
    let mut group = c.benchmark_group("gig");
    let cases = [
        ("column_update_n250", GigParams::new(1.0 - 125.0, 1.0, 4.0).unwrap()),
        ("column_update_n20000", GigParams::new(1.0 - 10_000.0, 1.0, 210.0).unwrap()),
        ("local_shrinkage_signal", GigParams::new(0.0, 2.0, 5.2e4).unwrap()),
        ("local_shrinkage_null", GigParams::new(0.0, 2.0, 1e-8).unwrap()),
    ];
    for (label, params) in cases {
        let mut rng = RngHandle::new(9);
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| sample_gig(&params, &mut rng))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_gig);
