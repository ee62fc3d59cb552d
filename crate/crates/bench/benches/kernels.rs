use std::time::Duration;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use rotovort_core::*;

fn production_field(n_r: usize, n_theta: usize) -> ComplexField2D {
    let (eps, omega) = (0.05, 12.0);
    let grid = PolarGrid::new(n_r, n_theta).unwrap();
    gp::initial_field(grid, eps, omega, InitState::TfPhaseNoise { seed: 7 }).unwrap()
}

fn bench_energy(c: &mut Criterion) {
    let field = production_field(256, 512);
    c.bench_function("gp_energy 256x512", |b| {
        b.iter(|| gp_energy(black_box(&field)).unwrap())
    });
}

fn bench_gradient(c: &mut Criterion) {
    let field = production_field(256, 512);
    c.bench_function("gp_gradient 256x512", |b| {
        b.iter(|| gp_gradient(black_box(&field)).unwrap())
    });
}

fn bench_flow_iterations(c: &mut Criterion) {
    let field = production_field(128, 256);
    c.bench_function("minimize 20 iterations 128x256", |b| {
        b.iter_batched(
            || field.clone(),
            |f| {
                minimize_from(
                    f,
                    MinimizeOpts {
                        max_iters: 20,
                        tol: 1e-16,
                        ..MinimizeOpts::default()
                    },
                    None,
                )
                .unwrap()
            },
            BatchSize::LargeInput,
        )
    });
}

fn bench_census(c: &mut Criterion) {
    let res = minimize_gp(
        PolarGrid::new(128, 256).unwrap(),
        0.1,
        12.0,
        InitState::TfPhaseNoise { seed: 3 },
        MinimizeOpts {
            tol: 1e-8,
            max_iters: 4000,
            ..MinimizeOpts::default()
        },
    )
    .unwrap();
    c.bench_function("detect_vortices 128x256", |b| {
        b.iter(|| detect_vortices(black_box(&res.field), 0.05).unwrap())
    });
}

fn bench_tf3d(c: &mut Criterion) {
    let trap = TrapPotential3D::RadialZ { c_r: 1.0, c_z: 1.0, s: 4.0 };
    c.bench_function("tf3d quartic g=1e4", |b| {
        b.iter(|| tf3d(black_box(&trap), 1e4, 10.0).unwrap())
    });
}

fn bench_lattice_trial(c: &mut Criterion) {
    let (eps, omega) = (0.05, 40.0);
    let lattice = build_lattice(omega, Region::Disc { radius: 1.0 }, LatticeKind::Triangular).unwrap();
    let grid = PolarGrid::new(128, 256).unwrap();
    c.bench_function("lattice trial field 128x256", |b| {
        b.iter(|| {
            let trial = lattice_trial(eps, omega, black_box(&lattice), eps).unwrap();
            trial.to_field(grid.clone()).unwrap()
        })
    });
}

fn bench_scattering(c: &mut Criterion) {
    let v = PairPotential::SquareBarrier { height: 8.0, range: 1.0 };
    c.bench_function("scattering_length 20k steps", |b| {
        b.iter(|| scattering_length(black_box(&v), 12.0, 20_000).unwrap())
    });
}

fn configured() -> Criterion {
    Criterion::default()
        .sample_size(10)
        .warm_up_time(Duration::from_millis(500))
        .measurement_time(Duration::from_secs(3))
}

criterion_group! {
    name = benches;
    config = configured();
    targets = bench_energy, bench_gradient, bench_flow_iterations, bench_census,
              bench_tf3d, bench_lattice_trial, bench_scattering
}
criterion_main!(benches);
