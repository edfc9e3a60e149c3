use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use spinstab_core::clifford::{build_gamma_rep, phi_map, SymTensor};
use spinstab_core::g2::{G2Structure, Projectors};
use spinstab_core::rng::seeded;
use spinstab_core::torus::flat::{lichnerowicz_form, tt_project};
use spinstab_core::torus::grid::odd_grid_size;
use spinstab_core::torus::lambda::lambda_eig;
use spinstab_core::torus::{FourierMetric, FourierSymTensor, Grid, GridMetric};
use spinstab_core::warped::{
    construct_locsta, fd_curvature_oracle, warped_scalar, FdSteps, FiberFamily, MassProfile, Schedule, WarpedMetric,
};

fn clifford(c: &mut Criterion) {
    c.bench_function("gamma_rep_n8", |b| b.iter(|| build_gamma_rep(8).unwrap()));
    let rep = build_gamma_rep(7).unwrap();
    let sigma = rep.default_spinor();
    let h = SymTensor::identity(7);
    c.bench_function("phi_map_n7", |b| b.iter(|| phi_map(&h, &sigma, &rep).unwrap()));
}

fn torus(c: &mut Criterion) {
    let mut rng = seeded(1);
    let h = FourierSymTensor::random(4, 3, 20, 1.0, &mut rng);
    c.bench_function("tt_project_n4_k3", |b| b.iter(|| tt_project(&h)));
    c.bench_function("lichnerowicz_form_n4_k3", |b| b.iter(|| lichnerowicz_form(&h)));
    let p = FourierSymTensor::random(3, 1, 2, 0.05, &mut rng);
    let grid = Grid::new(3, odd_grid_size(1)).unwrap();
    let g = GridMetric::from_fourier(&grid, &FourierMetric::perturbed(p).unwrap()).unwrap();
    c.bench_function("lambda_eig_n3_k1", |b| b.iter(|| lambda_eig(&g).unwrap()));
}

fn g2(c: &mut Criterion) {
    c.bench_function("g2_projectors", |b| {
        b.iter_batched(|| G2Structure::new().unwrap(), |g| Projectors::new(&g).ranks(), BatchSize::SmallInput)
    });
}

fn warped(c: &mut Criterion) {
    let w = WarpedMetric::new(
        MassProfile::AsymptoticTail { m_inf: -0.4, c: 0.3 },
        FiberFamily::conformal_torus(0.3, -0.2),
        Schedule::Linear { r2: 1.0, r3: 3.0 },
    );
    let q = [0.4, 1.1];
    c.bench_function("warped_scalar", |b| b.iter(|| warped_scalar(&w, 2.0, &q).unwrap()));
    c.bench_function("fd_oracle", |b| b.iter(|| fd_curvature_oracle(&w, 2.0, &q, FdSteps::default()).unwrap()));
    let mut group = c.benchmark_group("construction");
    group.sample_size(10);
    group.bench_function("sphere_family", |b| b.iter(|| construct_locsta(&FiberFamily::sphere(1.0, 0.999)).unwrap()));
    group.finish();
}

criterion_group!(benches, clifford, torus, g2, warped);
criterion_main!(benches);
