use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sgrp_bench::{masked_history, reference_approx, reference_hazard, reference_repair};
use sgrp_core::{approx_intensity, sgrp_bounds, simulate_algorithm1, simulate_sgrp, simulate_thinning, stream, Stop};

fn simulators(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulate_10k");
    g.sample_size(10);
    for n in [5usize, 100] {
        g.bench_with_input(BenchmarkId::new("sgrp", n), &n, |b, &n| {
            b.iter(|| simulate_sgrp(n, &reference_repair(), &reference_hazard(), Stop::Events(10_000), &mut stream(1, 0)))
        });
        let am = reference_approx(n, 0.5);
        g.bench_with_input(BenchmarkId::new("thinning", n), &am, |b, am| {
            b.iter(|| simulate_thinning(am, Stop::Events(10_000), &mut stream(1, 0)))
        });
        g.bench_with_input(BenchmarkId::new("algorithm1", n), &am, |b, am| {
            b.iter(|| simulate_algorithm1(am, 10_000, &mut stream(1, 0)))
        });
    }
    g.finish();
}

fn evaluation(c: &mut Criterion) {
    let mh = masked_history(100, 20_000, 3);
    let t = mh.horizon();
    let am = reference_approx(100, 0.5);
    c.bench_function("sgrp_bounds_n100", |b| {
        b.iter(|| sgrp_bounds(black_box(&mh), &reference_repair(), &reference_hazard(), black_box(t)))
    });
    c.bench_function("approx_intensity_n100", |b| b.iter(|| approx_intensity(&am, black_box(&mh), black_box(t))));
}

criterion_group!(benches, simulators, evaluation);
criterion_main!(benches);
