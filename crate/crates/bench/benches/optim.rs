use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use polargrad::harness::{preset, run};
use polargrad::optim::{
    adam_step, muon_step, polar_grad_step, AdamConfig, MuonConfig, OptimizerState, PolarGradConfig, Schedule,
};
use polargrad::polar::PolarMethod;
use polargrad_bench::{gaussian, SHAPES};

fn steps(c: &mut Criterion) {
    let mut group = c.benchmark_group("step");
    group.sample_size(20);
    let lr = Schedule::constant(1e-3);
    let pg = PolarGradConfig { polar: PolarMethod::qdwh_steps(2), ..PolarGradConfig::new(lr) };
    let muon = MuonConfig::new(lr, 0.95);
    let adam = AdamConfig::new(lr);
    for (m, n) in SHAPES {
        let g = gaussian(m, n, 2);
        let x0 = gaussian(m, n, 3);
        let id = format!("{m}x{n}");
        group.bench_with_input(BenchmarkId::new("polargrad_qdwh2", &id), &g, |b, g| {
            let (mut x, mut st) = (x0.clone(), OptimizerState::new(m, n));
            b.iter(|| polar_grad_step(&mut x, black_box(g), &pg, &mut st).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("muon_ns5", &id), &g, |b, g| {
            let (mut x, mut st) = (x0.clone(), OptimizerState::new(m, n));
            b.iter(|| muon_step(&mut x, black_box(g), &muon, &mut st).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("adam", &id), &g, |b, g| {
            let (mut x, mut st) = (x0.clone(), OptimizerState::new(m, n));
            b.iter(|| adam_step(&mut x, black_box(g), &adam, &mut st).unwrap())
        });
    }
    group.finish();
}

fn desk_runs(c: &mut Criterion) {
    let mut group = c.benchmark_group("desk_run");
    group.sample_size(10);
    for name in ["desk/quad/PolarGrad(QDWH)", "desk/completion/PolarGrad(QDWH)", "desk/logistic/Adam"] {
        let mut cfg = preset(name).unwrap();
        cfg.total_steps = 50;
        cfg.cond_every = 50;
        group.bench_function(name, |b| b.iter(|| run(black_box(&cfg)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, steps, desk_runs);
criterion_main!(benches);
