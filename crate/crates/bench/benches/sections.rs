use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use msx_core::asymptotics::beta_limits;
use msx_core::catalog::{example_kernel, ExampleParams};
use msx_core::spectra::lambda_sequence;
use msx_core::{cholesky_transition, section, LimitConfig};

fn transition(c: &mut Criterion) {
    let k = example_kernel("example4", &ExampleParams::with_a(0.5)).unwrap();
    let mut g = c.benchmark_group("cholesky_transition");
    for n in [50, 100, 200] {
        let s = section(&k, n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| b.iter(|| cholesky_transition(s).unwrap()));
    }
    g.finish();
}

fn lambdas(c: &mut Criterion) {
    let k = example_kernel("two_plus_cos", &ExampleParams::default()).unwrap();
    let mut g = c.benchmark_group("lambda_sequence");
    g.sample_size(10);
    for n in [50, 100] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| lambda_sequence(&k, n).unwrap()));
    }
    g.finish();
}

fn betas(c: &mut Criterion) {
    let k = example_kernel("example4", &ExampleParams::with_a(0.5)).unwrap();
    let cfg = LimitConfig::default();
    c.bench_function("beta_limits/k20_n200", |b| b.iter(|| beta_limits(&k, 20, 200, &cfg).unwrap()));
}

criterion_group!(benches, transition, lambdas, betas);
criterion_main!(benches);
