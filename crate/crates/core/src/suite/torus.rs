use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::Battery;
use crate::clifford::build_gamma_rep;
use crate::report::CheckRecord;
use crate::torus::cy::{cy_dirac_check, FormField};
use crate::torus::field::{random_modes, FourierField, FourierScalarField, FourierSymTensor, Mode};
use crate::torus::flat::{
    cover_pullback, divergence, kernel_basis, lichnerowicz_flat, lichnerowicz_form, lie_derivative,
    phi_commutes_with_nabla_on_grid, phi_field, rayleigh, rough_laplacian, tt_project, twisted_dirac, QuadraticForm,
};
use crate::torus::grid::{default_grid_size, odd_grid_size};
use crate::torus::lambda::{lambda_eig, lambda_variations};
use crate::torus::metric::conformally_flat;
use crate::torus::{linearization_check, metric_curvature, FourierMetric, Grid, GridMetric};

const PHI: &str = "The map $\\Phi$ satisfies";
const DIRAC_SQUARE: &str = "e_k\\cdot\\grd_{e_k}(e_l\\cdot\\grd_{e_l}\\Phi(h))";
const POSITIVE: &str = "positive semi-definite and $\\mathcal{L}_{g}h=0$ iff";
const KERNEL: &str = "W_{g}=\\{h|\\operatorname{tr}_gh=0,\\delta h=0,\\mathcal{D}\\Phi(h)=0\\}";
const DECOMPOSITION: &str = "decomposed as $h=\\bar{h}+h_1+h_2$";
const LICHNEROWICZ: &str = "is the so called the Lichnerowicz Laplacian";
const CALCULUS: &str = "where … $D^2$ denotes the Hessian";
const FORMULAS: &str = "we collect a few formulas";
const EIGEN: &str = "Let $\\lambda(g)$ be its first eigenvalue";
const FIRST: &str = "and hence the elegant";
const SECOND: &str = "The second variation of $\\lambda$ at a Ricci flat metric";
const SIGN: &str = "its sign is conformally invariant";
const DIAGRAM: &str = "the following diagram commutes";
const CY_DIRAC: &str = "The Dirac operator is then identified as";

/// Random traceless symmetric `A` with `A k = 0` and `|A|² = 2` for a
/// nonzero mode `m`, so that `A cos(k·x)` is a TT field with mean square 1.
fn tt_amplitude(m: &[i32], rng: &mut impl Rng) -> DMatrix<f64> {
    let n = m.len();
    let k = DMatrix::from_fn(n, 1, |i, _| m[i] as f64);
    let p = DMatrix::<f64>::identity(n, n) - &k * k.transpose() / k.norm_squared();
    let s = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let mut a = &p * (&s + s.transpose()) * &p;
    a -= &p * (a.trace() / (n as f64 - 1.0));
    let scale = (2.0 / a.norm_squared()).sqrt();
    a * scale
}

fn random_vector_field(
    n: usize,
    cutoff: usize,
    amplitude: f64,
    rng: &mut impl Rng,
) -> FourierField<DMatrix<Complex64>> {
    let mut x = FourierField::<DMatrix<Complex64>>::new(n, cutoff);
    for m in random_modes(n, cutoff, 2, rng) {
        let c = DMatrix::from_fn(n, 1, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * amplitude
        });
        x.add_real_mode(m, c).expect("mode within cutoff");
    }
    x
}

fn relative(diff: f64, scale: f64) -> f64 {
    diff / scale.max(f64::MIN_POSITIVE)
}

pub(super) fn run(b: &mut Battery) {
    flat_operators(b);
    calculus(b);
    lambda(b);
    cover_and_cy(b);
}

fn flat_operators(b: &mut Battery) {
    let cutoff = b.cfg.cutoff;
    let mut rng = b.seed(600);
    b.run("phi_nabla_commutation", PHI, |cfg| {
        let mut out = Vec::new();
        for n in [2, 3, 4] {
            let rep = build_gamma_rep(n)?;
            let h = FourierSymTensor::random(n, cutoff, 3, 1.0, &mut rng);
            let grid = Grid::new(n, default_grid_size(cutoff))?;
            let r = phi_commutes_with_nabla_on_grid(&h, &rep.default_spinor(), &rep, &grid)?;
            out.push(CheckRecord::at_most(format!("phi_nabla_commutation.n{n}"), PHI, r, cfg.tol(1e-10)));
        }
        Ok(out)
    });

    for n in [4, 7] {
        let k = if n == 7 { b.cfg.cutoff_n7 } else { b.cfg.cutoff };
        let fields = b.cfg.samples.dirac_fields;
        let mut rng = b.seed(610 + n as u64);
        b.run(&format!("dirac_square.n{n}"), DIRAC_SQUARE, |cfg| {
            let rep = build_gamma_rep(n)?;
            let s0 = rep.default_spinor();
            let (mut square, mut form, mut symmetric): (f64, f64, f64) = (0.0, 0.0, 0.0);
            let mut constant: f64 = 0.0;
            for _ in 0..fields {
                let h = FourierSymTensor::random(n, k, 6, 1.0, &mut rng);
                let phi = phi_field(&h, &s0, &rep)?;
                let dphi = twisted_dirac(&phi, &rep);
                let rhs = phi_field(&rough_laplacian(&h), &s0, &rep)?;
                square = square.max(relative(twisted_dirac(&dphi, &rep).max_coeff_diff(&rhs), rhs.max_coeff()));
                let q = lichnerowicz_form(&h);
                form = form.max(relative((q - dphi.l2_norm_sqr()).abs(), q));
                let g = FourierSymTensor::random(n, k, 6, 1.0, &mut rng);
                let psi = phi_field(&g, &s0, &rep)?;
                let lhs = dphi.l2_inner(&psi);
                let rhs = phi.l2_inner(&twisted_dirac(&psi, &rep));
                symmetric = symmetric.max(relative((lhs - rhs).abs(), lhs.abs().max(1.0)));
                let a = DMatrix::from_fn(n, n, |i, j| (i + j) as f64 / n as f64);
                let c = phi_field(&FourierSymTensor::constant(&(&a + a.transpose())), &s0, &rep)?;
                constant = constant.max(twisted_dirac(&c, &rep).max_coeff());
            }
            Ok(vec![
                CheckRecord::at_most(format!("dirac_square.n{n}"), DIRAC_SQUARE, square, cfg.tol(1e-10)),
                CheckRecord::at_most(format!("form_identity.n{n}"), POSITIVE, form, cfg.tol(1e-10)),
                CheckRecord::at_most(format!("dirac_symmetric.n{n}"), DIRAC_SQUARE, symmetric, cfg.tol(1e-10)),
                CheckRecord::at_most(format!("dirac_constant.n{n}"), PHI, constant, 0.0),
            ])
        });
    }

    for n in [4, 7] {
        let k = if n == 7 { b.cfg.cutoff_n7 } else { b.cfg.cutoff };
        let count = b.cfg.samples.rayleigh;
        let mut rng = b.seed(620 + n as u64);
        b.run(&format!("rayleigh_min.n{n}"), POSITIVE, |cfg| {
            let mut min = f64::INFINITY;
            for _ in 0..count {
                let h = tt_project(&FourierSymTensor::random(n, k, 4, 1.0, &mut rng)).h_bar;
                if h.l2_norm_sqr() > 1e-20 {
                    min = min.min(rayleigh(&h));
                }
            }
            Ok(vec![CheckRecord::at_least(format!("rayleigh_min.n{n}"), POSITIVE, min, -cfg.tol(1e-10))
                .with_detail(format!("{count} projected TT fields"))])
        });
    }

    for n in [4, 7] {
        let k = if n == 7 { b.cfg.cutoff_n7 } else { b.cfg.cutoff };
        b.run(&format!("kernel_dimension.n{n}"), KERNEL, |cfg| {
            let rep = build_gamma_rep(n)?;
            let s0 = rep.default_spinor();
            let basis = kernel_basis(n, k, &rep, &s0)?;
            let mut residual: f64 = 0.0;
            for t in &basis.tensors {
                residual = residual.max(t.flat_trace().max_coeff());
                residual = residual.max(divergence(t).max_coeff());
                residual = residual.max(twisted_dirac(&phi_field(t, &s0, &rep)?, &rep).max_coeff());
            }
            Ok(vec![
                CheckRecord::equal(
                    format!("kernel_dimension.n{n}"),
                    KERNEL,
                    basis.dimension() as f64,
                    (n * (n + 1) / 2 - 1) as f64,
                )
                .with_detail(format!("cutoff {k}")),
                CheckRecord::at_most(format!("kernel_membership.n{n}"), KERNEL, residual, cfg.tol(1e-10)),
            ])
        });
    }
}

fn calculus(b: &mut Battery) {
    let cutoff = b.cfg.cutoff;
    let mut rng = b.seed(700);
    b.run("tt_projection", DECOMPOSITION, |cfg| {
        let h = FourierSymTensor::random(3, cutoff, 8, 1.0, &mut rng);
        let dec = tt_project(&h);
        let recon = dec.h_bar.plus(&dec.h1).plus(&dec.h2);
        let norm = h.l2_norm_sqr();
        let orth = dec.h_bar.l2_inner(&dec.h1).abs().max(dec.h_bar.l2_inner(&dec.h2).abs()) / norm;
        Ok(vec![
            CheckRecord::at_most(
                "tt_projection.reconstruction",
                DECOMPOSITION,
                recon.max_coeff_diff(&h),
                cfg.tol(1e-12),
            ),
            CheckRecord::at_most(
                "tt_projection.trace",
                DECOMPOSITION,
                dec.h_bar.flat_trace().max_coeff(),
                cfg.tol(1e-12),
            ),
            CheckRecord::at_most(
                "tt_projection.divergence",
                DECOMPOSITION,
                divergence(&dec.h_bar).max_coeff(),
                cfg.tol(1e-12),
            ),
            CheckRecord::at_most("tt_projection.orthogonality", DECOMPOSITION, orth, cfg.tol(1e-12)),
        ])
    });

    b.run("lichnerowicz_symbol", LICHNEROWICZ, |cfg| {
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let m = random_modes(4, cutoff, 1, &mut rng).remove(0);
            let k2: f64 = m.iter().map(|v| (v * v) as f64).sum();
            let h = FourierSymTensor::cos_mode(m.clone(), &tt_amplitude(&m, &mut rng))?;
            worst = worst.max(lichnerowicz_flat(&h).max_coeff_diff(&h.scale(k2)));
        }
        Ok(vec![CheckRecord::at_most("lichnerowicz_symbol", LICHNEROWICZ, worst, cfg.tol(1e-14))])
    });

    b.run("conformal_2d_scalar", CALCULUS, |cfg| {
        let grid = Grid::new(2, 32)?;
        let u = FourierScalarField::trig(2, vec![1, 0], 0.1, 0.0)?;
        let geo = metric_curvature(&conformally_flat(&grid, &u))?;
        let mut worst: f64 = 0.0;
        for (p, x) in grid.points().enumerate() {
            // S = −2 e^{−2u} Δu for g = e^{2u} δ
            let uu = 0.1 * x[0].cos();
            worst = worst.max((geo.scalar()[p] - 2.0 * (-2.0 * uu).exp() * uu).abs());
        }
        Ok(vec![CheckRecord::at_most("conformal_2d_scalar", CALCULUS, worst, cfg.tol(1e-9))])
    });

    let seeded_metric = |rng: &mut rand_chacha::ChaCha8Rng, size: usize| -> crate::Result<GridMetric> {
        let p = FourierSymTensor::random(3, 1, 2, 0.02, rng);
        GridMetric::from_fourier(&Grid::new(3, size)?, &FourierMetric::perturbed(p)?)
    };

    b.run("riemann_symmetry", CALCULUS, |cfg| {
        let metric = seeded_metric(&mut rng, 12)?;
        let geo = metric_curvature(&metric)?;
        Ok(vec![CheckRecord::at_most("riemann_symmetry", CALCULUS, geo.riemann_symmetry_residual(), cfg.tol(1e-9))])
    });

    b.run("adjointness", CALCULUS, |cfg| {
        let metric = seeded_metric(&mut rng, 16)?;
        let geo = metric_curvature(&metric)?;
        let grid = metric.grid();
        let h = grid.sample_sym(&FourierSymTensor::random(3, 2, 4, 1.0, &mut rng));
        let w: Vec<Vec<f64>> =
            (0..3).map(|_| grid.sample_scalar(&FourierScalarField::random(3, 2, 3, 1.0, &mut rng))).collect();
        let lhs = geo.l2_inner_1form(&geo.divergence(&h), &w);
        let rhs = geo.l2_inner_sym(&h, &geo.delta_star(&w));
        let f = grid.sample_scalar(&FourierScalarField::random(3, 2, 3, 1.0, &mut rng));
        let g = grid.sample_scalar(&FourierScalarField::random(3, 2, 3, 1.0, &mut rng));
        let dot = |a: &[f64], c: &[f64]| geo.integrate(&a.iter().zip(c).map(|(x, y)| x * y).collect::<Vec<_>>());
        let (lf, lg) = (geo.laplacian(&f), geo.laplacian(&g));
        let (a, c) = (dot(&lf, &g), dot(&f, &lg));
        Ok(vec![
            CheckRecord::at_most(
                "adjointness.divergence",
                CALCULUS,
                relative((lhs - rhs).abs(), lhs.abs().max(1.0)),
                cfg.tol(1e-10),
            ),
            CheckRecord::at_most(
                "adjointness.laplacian",
                CALCULUS,
                relative((a - c).abs(), a.abs().max(1.0)),
                cfg.tol(1e-10),
            ),
        ])
    });

    b.run("linearization", FORMULAS, |cfg| {
        let metric = seeded_metric(&mut rng, 16)?;
        let grid = metric.grid();
        let h = grid.sample_sym(&FourierSymTensor::random(3, 1, 3, 0.1, &mut rng));
        let f = grid.sample_scalar(&FourierScalarField::random(3, 1, 3, 1.0, &mut rng));
        let steps: Vec<f64> = (0..5).map(|j| 0.02 / 2f64.powi(j)).collect();
        let rep = linearization_check(&metric, &h, &f, &steps)?;
        let mut out = Vec::new();
        for s in [&rep.ricci, &rep.scalar, &rep.laplacian] {
            out.push(CheckRecord::at_most(
                format!("linearization.{}.error", s.name),
                FORMULAS,
                s.best_error(),
                cfg.tol(1e-6),
            ));
            out.push(CheckRecord::at_least(
                format!("linearization.{}.order", s.name),
                FORMULAS,
                s.leading_order(),
                1.9,
            ));
        }
        Ok(out)
    });
}

fn lambda(b: &mut Battery) {
    let lc = b.cfg.lambda_cutoff;
    let size = odd_grid_size(lc);
    let mut rng = b.seed(800);

    b.run("lambda.basic", EIGEN, |cfg| {
        let grid = Grid::new(3, size)?;
        let flat = lambda_eig(&GridMetric::flat(&grid))?;
        let p = FourierSymTensor::random(3, lc, 2, 0.15, &mut rng);
        let g = GridMetric::from_fourier(&grid, &FourierMetric::perturbed(p)?)?;
        let sol = lambda_eig(&g)?;
        let integral = metric_curvature(&g)?.integrate(&sol.psi);
        let scaled = lambda_eig(&g.scaled(2.5))?;
        Ok(vec![
            CheckRecord::at_most("lambda.flat", EIGEN, flat.lambda.abs(), cfg.tol(1e-12)),
            CheckRecord::at_most("lambda.residual", EIGEN, sol.residual, cfg.tol(1e-8)),
            CheckRecord::at_least("lambda.positive_eigenfunction", EIGEN, sol.min_psi(), f64::MIN_POSITIVE),
            CheckRecord::at_most("lambda.normalization", EIGEN, (integral - 1.0).abs(), cfg.tol(1e-12)),
            CheckRecord::at_most(
                "lambda.scaling",
                EIGEN,
                relative((scaled.lambda - sol.lambda / 2.5).abs(), sol.lambda.abs()),
                cfg.tol(1e-10),
            ),
        ])
    });

    let count = b.cfg.samples.lambda_first;
    b.run("lambda.first_variation", FIRST, |cfg| {
        let grid = Grid::new(3, size)?;
        let flat = GridMetric::flat(&grid);
        let mut worst: f64 = 0.0;
        for _ in 0..count {
            let h = FourierSymTensor::random(3, lc, 2, 0.5, &mut rng);
            let norm = (h.l2_norm_sqr() / h.volume()).sqrt();
            let var = lambda_variations(&flat, &h, 0.05)?;
            worst = worst.max(var.first_extrapolated.abs() / norm);
        }
        Ok(vec![CheckRecord::at_most("lambda.first_variation", FIRST, worst, cfg.tol(1e-6))
            .with_detail(format!("{count} directions; value is max |dλ/dt| / ‖h‖"))])
    });

    let count = b.cfg.samples.lambda_second;
    for n in [3, 4] {
        let id = format!("lambda.second_variation.n{n}");
        b.run(&id.clone(), SECOND, |cfg| {
            let grid = Grid::new(n, size)?;
            let flat = GridMetric::flat(&grid);
            let mut worst: f64 = 0.0;
            for _ in 0..count {
                let m: Mode = random_modes(n, lc, 1, &mut rng).remove(0);
                let k2: f64 = m.iter().map(|v| (v * v) as f64).sum();
                let h = FourierSymTensor::cos_mode(m.clone(), &tt_amplitude(&m, &mut rng))?;
                // (1/Vol)∫|∇h|² = |k|²·|A|²/2 = |k|² for |A|² = 2.
                let expected = -(n as f64 - 2.0) / (8.0 * (n as f64 - 1.0)) * k2;
                let var = lambda_variations(&flat, &h, 0.05)?;
                worst = worst.max(((var.second_extrapolated - expected) / expected).abs());
            }
            Ok(vec![CheckRecord::at_most(id, SECOND, worst, cfg.tol(2e-2)).with_detail(format!("{count} TT modes"))])
        });
    }

    b.run("lambda.lie_direction", SECOND, |cfg| {
        let grid = Grid::new(3, size)?;
        let flat = GridMetric::flat(&grid);
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let h = grid.sample_sym(&lie_derivative(&random_vector_field(3, lc, 0.5, &mut rng)));
            for t in [1e-2, -1e-2, 5e-3] {
                worst = worst.max(lambda_eig(&flat.plus(&h, t))?.lambda.abs());
            }
        }
        Ok(vec![CheckRecord::at_most("lambda.lie_direction", SECOND, worst, cfg.tol(1e-8))])
    });

    b.run("lambda.conformal_direction", SECOND, |cfg| {
        let grid = Grid::new(3, size)?;
        let flat = GridMetric::flat(&grid);
        let mut worst: f64 = 0.0;
        for _ in 0..3 {
            let m: Mode = random_modes(3, lc, 1, &mut rng).remove(0);
            let tt = FourierSymTensor::cos_mode(m.clone(), &tt_amplitude(&m, &mut rng))?;
            let u = FourierScalarField::random(3, lc, 1, 0.5, &mut rng);
            let mixed = tt.plus(&FourierSymTensor::conformal(&u));
            let base = lambda_variations(&flat, &tt, 0.05)?.second_extrapolated;
            let with = lambda_variations(&flat, &mixed, 0.05)?.second_extrapolated;
            worst = worst.max(((with - base) / base).abs());
        }
        Ok(vec![CheckRecord::at_most("lambda.conformal_direction", SECOND, worst, cfg.tol(2e-2))])
    });

    let pairs = b.cfg.samples.conformal_pairs;
    b.run("lambda.conformal_sign", SIGN, |_| {
        let grid = Grid::new(3, size)?;
        let (mut flips, mut eligible) = (0usize, 0usize);
        for _ in 0..pairs {
            let p = FourierSymTensor::random(3, lc, 2, 0.05, &mut rng);
            let g = GridMetric::from_fourier(&grid, &FourierMetric::perturbed(p)?)?;
            let w = grid.sample_scalar(&FourierScalarField::random(3, lc, 3, 0.03, &mut rng));
            // (1 + w)^{4/(n−2)} with n = 3
            let factor: Vec<f64> = w.iter().map(|v| (1.0 + v).powi(4)).collect();
            let before = lambda_eig(&g)?.lambda;
            let after = lambda_eig(&g.conformal(&factor))?.lambda;
            if before.abs() >= 1e-4 && after.abs() >= 1e-4 {
                eligible += 1;
                flips += usize::from(before.signum() != after.signum());
            }
        }
        Ok(vec![
            CheckRecord::exact("lambda.conformal_sign", SIGN, flips)
                .with_detail(format!("{eligible} of {pairs} pairs with |λ| ≥ 1e-4")),
            CheckRecord::at_least("lambda.conformal_sign.eligible", SIGN, eligible as f64, pairs as f64),
        ])
    });
}

fn cover_and_cy(b: &mut Battery) {
    let mut rng = b.seed(900);
    let cutoff = b.cfg.cutoff;
    b.run("cover", DIAGRAM, |_| {
        let h = FourierSymTensor::random(2, cutoff, 5, 1.0, &mut rng);
        let base = QuadraticForm::of(&h);
        let (mut commute, mut ratio) = (0usize, 0usize);
        for a in 1..=3 {
            for c in 1..=3 {
                let folds = [a, c];
                let up = cover_pullback(&h, &folds)?;
                let lhs = lichnerowicz_flat(&up);
                let rhs = cover_pullback(&lichnerowicz_flat(&h), &folds)?;
                commute += usize::from(lhs.max_coeff_diff(&rhs) != 0.0 || lhs.len() != rhs.len());
                ratio += usize::from(QuadraticForm::of(&up).ratio(&base) != (a * c) as f64);
            }
        }
        Ok(vec![
            CheckRecord::exact("cover.commutation", DIAGRAM, commute).with_detail("fold counts up to (3,3)"),
            CheckRecord::exact("cover.quadratic_ratio", DIAGRAM, ratio),
        ])
    });

    for m in [1, 2] {
        let id = format!("cy.dirac.m{m}");
        b.run(&id.clone(), CY_DIRAC, |cfg| {
            let field = FormField::random(m, cutoff, 40, &mut rng)?;
            let r = cy_dirac_check(&field)?;
            Ok(vec![
                CheckRecord::at_most(id, CY_DIRAC, r.plus_residual, cfg.tol(1e-10))
                    .with_detail("convention mismatch: holds with the adjoint term entering with a plus sign"),
                CheckRecord::info(format!("cy.dirac_literal.m{m}"), CY_DIRAC, r.minus_residual)
                    .with_detail("convention mismatch: literal sign with the L2 adjoint"),
            ])
        });
    }
}
