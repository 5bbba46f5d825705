//! Change-point detector throughput on synthetic weekly-style series.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use newstrace::changepoint::{binseg, bocpd, loess_trend, pelt_grid, BocpdParams};

/// Piecewise-constant series with Gaussian noise and a level shift every
/// twenty points.
fn synthetic_series(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = 5.0;
    let mut values = Vec::with_capacity(len);
    for i in 0..len {
        if i > 0 && i % 20 == 0 {
            level += if rng.gen_bool(0.5) { 4.0 } else { -4.0 };
        }
        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        values.push(level + (-2.0 * u1.ln()).sqrt() * u2.cos());
    }
    values
}

fn bench_detectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("detectors");
    for len in [52usize, 156, 520] {
        let values = synthetic_series(len, 7);
        group.bench_with_input(BenchmarkId::new("pelt_grid", len), &values, |b, v| {
            b.iter(|| pelt_grid(v, &[0.5, 1.0, 2.0], 1.0).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("binseg", len), &values, |b, v| {
            b.iter(|| binseg(v, len / 20).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("bocpd", len), &values, |b, v| {
            b.iter(|| bocpd(v, &BocpdParams::default()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("loess", len), &values, |b, v| {
            b.iter(|| loess_trend(v, 0.25).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_detectors);
criterion_main!(benches);
