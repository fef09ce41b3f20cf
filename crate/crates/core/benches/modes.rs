use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hyperslice::gf;
use hyperslice::grand;
use hyperslice::oracle::{self, Limits};
use hyperslice::par::{self, Exec};
use hyperslice::slices::{solve_slice_system, DegreeBounds};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn bounds(w: usize, b: usize) -> DegreeBounds {
    DegreeBounds::new(w, b).unwrap()
}

fn fixed_perimeter(c: &mut Criterion) {
    let sol = solve_slice_system(bounds(3, 3), 6);
    let mut g = c.benchmark_group("gf_verify_3x3");
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::with_mode(mode, || black_box(gf::verify(&sol, 5))))
        });
    }
    g.finish();
}

fn all_perimeter(c: &mut Criterion) {
    let mut g = c.benchmark_group("grand_verify_2x2");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::with_mode(mode, || black_box(grand::verify(bounds(2, 2), 4, 6, 3, 3))))
        });
    }
    g.finish();
}

fn oracle_comparison(c: &mut Criterion) {
    let all: Vec<DegreeBounds> = (1..=3).flat_map(|w| (1..=3).map(move |b| bounds(w, b))).collect();
    let mut g = c.benchmark_group("oracle_verify_e4");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::with_mode(mode, || black_box(oracle::verify(4, &all, Limits::default()))))
        });
    }
    g.finish();
}

criterion_group!(benches, fixed_perimeter, all_perimeter, oracle_comparison);
criterion_main!(benches);
