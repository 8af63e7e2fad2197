use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ddsim::config::RunConfig;
use ddsim::diagnostics::interpolation_suite;
use ddsim::exec;
use ddsim::harness::verify::random_corpus;
use ddsim::integrator::run;

fn short_run(nu: f64) -> RunConfig {
    RunConfig::from_toml(&format!(
        r#"
[grid]
n_modes = 128
period = 62.83185307179586

[physics]
delta = 0.5
nu = {nu}
u_tilde = 1.0
flux = "burgers"

[initial]
kind = "gaussian_packet"
amplitude = 0.5
width = 3.0
wavenumber = 1.0
zero_mean = true

[stepper]
dt = 0.01
t_end = 1.0
snapshot_stride = 10
"#
    ))
    .unwrap()
}

fn corpus(c: &mut Criterion) {
    let fields = random_corpus(200, 7);
    let check = |psi: &ddsim::spectral::Field| interpolation_suite(psi, 1e-3, 1e-300).iter().all(|r| r.holds);
    let mut group = c.benchmark_group("interpolation_corpus");
    group.bench_function(BenchmarkId::new("map", exec::is_parallel()), |b| b.iter(|| exec::map(&fields, check)));
    group.bench_function("map_sequential", |b| b.iter(|| exec::map_sequential(&fields, check)));
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let configs: Vec<RunConfig> = (1..=8).map(|i| short_run(0.05 * i as f64)).collect();
    let go = |config: &RunConfig| run(config).unwrap().final_state;
    let mut group = c.benchmark_group("run_sweep");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("map", exec::is_parallel()), |b| b.iter(|| exec::map(&configs, go)));
    group.bench_function("map_sequential", |b| b.iter(|| exec::map_sequential(&configs, go)));
    group.finish();
}

criterion_group!(benches, corpus, sweep);
criterion_main!(benches);
