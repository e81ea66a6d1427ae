use std::hint::black_box;
use std::path::Path;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rfuwoc::cli::{run_sweep, Grid, LoadedPreset, Method, SweepSpec};
use rfuwoc::mc::{simulate_sop_with, McConfig, McMode};
use rfuwoc::secrecy::{k_terms_exact, Contours};
use rfuwoc::Execution;

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn fig1_spec() -> SweepSpec {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets/fig1.toml");
    LoadedPreset::load(&path).unwrap().specs().unwrap().remove(0)
}

fn monte_carlo(c: &mut Criterion) {
    let s = fig1_spec().scenario_at(10.0).unwrap();
    let cfg = McConfig {
        trials: 1_000_000,
        master_seed: 1,
        chunk_size: 50_000,
        mode: McMode::LowerBound,
    };
    let mut g = c.benchmark_group("mc_1e6_trials");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| simulate_sop_with(black_box(&s), &cfg, exec).unwrap())
        });
    }
    g.finish();
}

fn exact_terms(c: &mut Criterion) {
    let s = fig1_spec().scenario_at(10.0).unwrap();
    let contours = Contours::default();
    let mut g = c.benchmark_group("bivariate_k_terms");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| k_terms_exact(black_box(&s), &contours, exec).unwrap())
        });
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let mut spec = fig1_spec();
    spec.grid = Grid {
        start: -10.0,
        stop: 30.0,
        step: 10.0,
    };
    spec.methods = [Method::Exact, Method::Saturation].into();
    spec.mc = None;
    let mut g = c.benchmark_group("sweep_5_points");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_sweep(black_box(&spec), exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, monte_carlo, exact_terms, sweep);
criterion_main!(benches);
