use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nula::design::{
    enumerate_designs, optimize_finite_n_with, verify_cancellation_with, DesignRequest, NulaDesign,
};
use nula::exec::Exec;
use nula::io::pattern_table_with;
use nula::scenario::{
    fp_convergence_sweep_with, ElementPattern, GeometryFamily, User, UserScenario,
};
use nula::{Angle, NulaGeometry, UlaGeometry};
use std::hint::black_box;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn deg(x: f64) -> Angle {
    Angle::from_degrees(x).unwrap()
}

fn pattern(c: &mut Criterion) {
    let geom = NulaGeometry::new(25, UlaGeometry::new(4, 0.6).unwrap(), 0.504)
        .unwrap()
        .into();
    let mut g = c.benchmark_group("pattern_0.01deg");
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| pattern_table_with(black_box(&geom), deg(45.0), 0.01, exec).unwrap())
        });
    }
    g.finish();
}

fn certification(c: &mut Criterion) {
    let design = NulaDesign::new(25, 21, 0.6).unwrap();
    let mut g = c.benchmark_group("verify_cancellation");
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| verify_cancellation_with(black_box(&design), 0.6, deg(60.0), exec))
        });
    }
    g.finish();
}

fn finite_n(c: &mut Criterion) {
    let req = DesignRequest::new(0.6, deg(45.0), None).unwrap();
    let designs = enumerate_designs(&req, 8, 0.6).unwrap();
    let mut g = c.benchmark_group("optimize_finite_n");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| {
                optimize_finite_n_with(&req, 8, black_box(&designs), deg(45.0), exec).unwrap()
            })
        });
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let users = [45.0, -73.65, 10.0, -20.0]
        .iter()
        .map(|&a| User::los(deg(a), 10.0))
        .collect();
    let scenario = UserScenario::new(users, 0, ElementPattern::Omni).unwrap();
    let family = GeometryFamily::Ula { d: 0.6 };
    let ns: Vec<usize> = (1..=64).map(|i| i * 16).collect();
    let mut g = c.benchmark_group("fp_convergence_sweep");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, ns.len()), &ns, |b, ns| {
            b.iter(|| fp_convergence_sweep_with(&family, &scenario, ns, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, pattern, certification, finite_n, sweep);
criterion_main!(benches);
