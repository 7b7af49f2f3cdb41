use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sdpi_core::prob::{Direction, Distribution, JointDistribution};
use sdpi_core::rd::{rd_at_distortion, DistortionMatrix};
use sdpi_core::sdpi::{sstar, SdpiConfig};

fn quaternary() -> JointDistribution {
    let mut probs = vec![0.025; 16];
    for i in 0..4 {
        probs[i * 4 + i] = 0.1;
    }
    JointDistribution::new(4, 4, probs).unwrap()
}

fn bench_sstar(c: &mut Criterion) {
    let dsbs = JointDistribution::doubly_symmetric_binary(0.1).unwrap();
    let cfg = SdpiConfig::default();
    c.bench_function("sstar_dsbs", |b| {
        b.iter(|| sstar(black_box(&dsbs), Direction::XToY, &cfg).unwrap())
    });

    let quat = quaternary();
    let mut group = c.benchmark_group("sstar_quaternary");
    group.sample_size(10);
    group.bench_function("grid_and_multistart", |b| {
        b.iter(|| sstar(black_box(&quat), Direction::XToY, &cfg).unwrap())
    });
    let ms_only = SdpiConfig {
        grid_max_alphabet: 0,
        ..SdpiConfig::default()
    };
    group.bench_function("multistart", |b| {
        b.iter(|| sstar(black_box(&quat), Direction::XToY, &ms_only).unwrap())
    });
    group.finish();
}

fn bench_rd(c: &mut Criterion) {
    let bern = Distribution::bernoulli(0.3).unwrap();
    let ham2 = DistortionMatrix::hamming(2).unwrap();
    c.bench_function("rd_binary_hamming", |b| {
        b.iter(|| rd_at_distortion(&bern, &ham2, black_box(0.1), 1e-9).unwrap())
    });
    let uni = Distribution::uniform(8).unwrap();
    let ham8 = DistortionMatrix::hamming(8).unwrap();
    c.bench_function("rd_8ary_hamming", |b| {
        b.iter(|| rd_at_distortion(&uni, &ham8, black_box(0.2), 1e-9).unwrap())
    });
}

criterion_group!(benches, bench_sstar, bench_rd);
criterion_main!(benches);
