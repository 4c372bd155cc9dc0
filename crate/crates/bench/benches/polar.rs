use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use polargrad::polar::PolarMethod;
use polargrad_bench::{conditioned, SHAPES};

fn methods() -> [(&'static str, PolarMethod); 5] {
    [
        ("svd", PolarMethod::reference()),
        ("qdwh", PolarMethod::qdwh()),
        ("qdwh2", PolarMethod::qdwh_steps(2)),
        ("zolo", PolarMethod::zolo()),
        ("ns5", PolarMethod::newton_schulz(5)),
    ]
}

fn polar(c: &mut Criterion) {
    for kappa in [1e2, 1e8] {
        let mut group = c.benchmark_group(format!("polar/kappa={kappa:.0e}"));
        group.sample_size(10);
        for (m, n) in SHAPES {
            let a = conditioned(m, n, kappa);
            for (name, method) in methods() {
                group.bench_with_input(BenchmarkId::new(name, format!("{m}x{n}")), &a, |b, a| {
                    b.iter(|| method.compute(black_box(a)).unwrap())
                });
            }
        }
        group.finish();
    }
}

criterion_group!(benches, polar);
criterion_main!(benches);
