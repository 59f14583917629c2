use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ffbif_core::dynamics::{euler_sweep, verify, SweepConfig, Thresholds, VectorField};
use ffbif_core::predictor::{all_branches_with, Direction};
use ffbif_core::{presets, Execution};

const MODES: [(&str, Execution); 2] = [
    ("parallel", Execution::Parallel),
    ("sequential", Execution::Sequential),
];

fn euler(c: &mut Criterion) {
    let p = presets::preset("fig2").unwrap();
    let field = VectorField::new(&p.net, &p.poly).unwrap();
    let cfg = SweepConfig {
        t_end: 200.0,
        ..SweepConfig::paper_protocol(p.x0.clone().unwrap())
    };
    let mut g = c.benchmark_group("euler_sweep_fig2");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &m| {
            b.iter(|| euler_sweep(black_box(&field), &cfg, m).unwrap())
        });
    }
    g.finish();
}

fn newton_verify(c: &mut Criterion) {
    let p = presets::preset("fig5b").unwrap();
    let jet = p.poly.jet(p.net.n_inputs()).unwrap();
    let cat = all_branches_with(&p.net, &jet, 1e-9, Execution::Sequential).unwrap();
    let cfg = SweepConfig::paper_protocol(vec![0.0; 5]);
    let thr = Thresholds::default();
    let mut g = c.benchmark_group("verify_fig5b");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &m| {
            b.iter(|| verify(&p.net, &p.poly, black_box(&cat), &cfg, &thr, Direction::Both, m).unwrap())
        });
    }
    g.finish();
}

fn catalog(c: &mut Criterion) {
    let p = presets::preset("fig5a").unwrap();
    let jet = p.poly.jet(p.net.n_inputs()).unwrap();
    let mut g = c.benchmark_group("catalog_fig5a");
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &m| {
            b.iter(|| all_branches_with(black_box(&p.net), &jet, 1e-9, m).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, euler, newton_verify, catalog);
criterion_main!(benches);
