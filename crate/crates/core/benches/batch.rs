//! Sequential against parallel execution on the batch workloads.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use epi_mackey::burnside::build_ring_with;
use epi_mackey::cube::random::oracle_batch;
use epi_mackey::cube::{CubePoset, SubPoset, SubShape};
use epi_mackey::epi_cat::SliceObject;
use epi_mackey::mackey::representable_with;
use epi_mackey::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn ring(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_ring_6_2");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| build_ring_with(black_box(6), 2, exec).unwrap()));
    }
    g.finish();
}

fn marks(c: &mut Criterion) {
    let ring = build_ring_with(6, 3, Exec::default()).unwrap();
    let mut g = c.benchmark_group("marks_homomorphism_6_3");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| ring.check_marks_homomorphism_with(exec)));
    }
    g.finish();
}

fn axioms(c: &mut Criterion) {
    let v = SliceObject::new(vec![2, 1]).unwrap();
    let m = representable_with(4, 2, &v, Exec::default()).unwrap();
    let mut g = c.benchmark_group("representable_axioms_4_2");
    g.sample_size(20);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| m.check_axioms_with(exec).unwrap()));
    }
    g.finish();
}

fn cube(c: &mut Criterion) {
    let p = CubePoset::subdivided(4, 2).unwrap();
    let s = SubPoset::new(&p, SubShape::Truncated).unwrap();
    let mut g = c.benchmark_group("cube_oracle_4_2_x50");
    g.sample_size(20);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| oracle_batch(&p, &s, 50, 0, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, ring, marks, axioms, cube);
criterion_main!(benches);
