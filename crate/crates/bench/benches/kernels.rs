// SPDX-License-Identifier: Apache-2.0

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use jacobi_transport::dynamics::{build_truncated, Evolution, SampleState};
use jacobi_transport::jacobi::transfer_matrix;
use jacobi_transport::reservoir::{m_function, Lead, Side};
use jacobi_transport::transport::{crystalline_current, steady_current, thouless_current};
use jacobi_transport_bench::{anderson, anderson_periodic, anderson_spec, free_spec};

fn transfer(c: &mut Criterion) {
    let model = anderson();
    let mut g = c.benchmark_group("transfer_matrix");
    for n in [100, 1000, 10_000] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| transfer_matrix(&model, black_box(0.3), n).unwrap())
        });
    }
    g.finish();
}

fn landauer(c: &mut Criterion) {
    let spec = anderson_spec(100, 2000);
    c.bench_function("steady_current/L=100/2000 nodes", |b| b.iter(|| steady_current(black_box(&spec)).unwrap()));
}

fn periodic(c: &mut Criterion) {
    let per = anderson_periodic(40);
    c.bench_function("m_function/L=40", |b| b.iter(|| m_function(&per, Side::Right, black_box(0.1), 0.0).unwrap()));
    c.bench_function("thouless_current/L=40", |b| b.iter(|| thouless_current(&per, (-1.0, 1.0)).unwrap()));
    let lead = Lead::FreeHalfLine;
    c.bench_function("crystalline_current/L=40", |b| {
        b.iter(|| crystalline_current(&per, &lead, &lead, 1.0, (-1.0, 1.0), 100).unwrap())
    });
}

fn dynamics(c: &mut Criterion) {
    let sys = build_truncated(&free_spec(5), 200, SampleState::Uniform).unwrap();
    let mut g = c.benchmark_group("dynamics");
    g.sample_size(10);
    g.bench_function("evolution/M=200", |b| b.iter(|| Evolution::new(black_box(&sys)).unwrap()));
    let evo = Evolution::new(&sys).unwrap();
    g.bench_function("cesaro_exact/M=200", |b| b.iter(|| evo.cesaro_exact(black_box(90.0))));
    g.finish();
}

criterion_group!(benches, transfer, landauer, periodic, dynamics);
criterion_main!(benches);
