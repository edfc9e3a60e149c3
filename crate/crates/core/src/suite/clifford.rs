use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use super::Battery;
use crate::clifford::{
    build_gamma_rep, composite_rotation, cy_clifford_model, exact_inner, phi_map, phi_map_exact,
    spin_equivariance_residual, SymTensor,
};
use crate::report::CheckRecord;
use crate::util::cmax;

const RELATIONS: &str = "e_ie_j+e_je_i=-2\\delta_{ij}";
const PHI: &str = "The map $\\Phi$ satisfies";
const SUSY: &str = "We define a linear map";
const CY: &str = "X\\cdot\\alpha=\\sqrt{2}(\\pi^{0,1}(X^*)\\wedge\\alpha-\\pi^{0,1}(X)\\lrcorner \\alpha)";
const CY_SPLIT: &str = "\\mathcal{S}^+(M)=\\bigoplus_{k\\ even}\\wedge^{0,k}";

pub(crate) const DIMENSIONS: [usize; 5] = [2, 3, 4, 7, 8];

pub(crate) fn random_sym(n: usize, rng: &mut impl Rng) -> SymTensor {
    SymTensor::symmetrize(&DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0)))
}

pub(super) fn run(b: &mut Battery) {
    for n in DIMENSIONS {
        let id = format!("relations.n{n}");
        b.run(&id.clone(), RELATIONS, |_| {
            let rep = build_gamma_rep(n)?;
            let violations = rep.relation_table().iter().filter(|m| !m.is_zero()).count();
            let skew = rep.exact().iter().filter(|g| g.adjoint() != g.scale(num_complex::Complex::new(-1, 0))).count();
            Ok(vec![
                CheckRecord::exact(id, RELATIONS, violations),
                CheckRecord::exact(format!("skew_adjoint.n{n}"), RELATIONS, skew),
            ])
        });
    }

    for n in DIMENSIONS {
        let id = format!("phi_isometry_exact.n{n}");
        let mut rng = b.seed(100 + n as u64);
        let count = b.cfg.samples.phi_isometry;
        b.run(&id.clone(), PHI, |_| {
            let rep = build_gamma_rep(n)?;
            let mut violations = 0;
            for _ in 0..count {
                let h: Vec<Vec<i64>> = {
                    let mut h = vec![vec![0i64; n]; n];
                    for i in 0..n {
                        for j in i..n {
                            let v = rng.random_range(-9..=9);
                            h[i][j] = v;
                            h[j][i] = v;
                        }
                    }
                    h
                };
                let phi = phi_map_exact(&h, &rep);
                let lhs = exact_inner(&phi, &phi);
                let rhs: i64 = h.iter().flatten().map(|v| v * v).sum();
                violations += usize::from(lhs != rhs);
            }
            Ok(vec![CheckRecord::exact(id, PHI, violations).with_detail(format!("{count} integer tensors"))])
        });
    }

    for n in DIMENSIONS {
        let id = format!("phi_isometry.n{n}");
        let mut rng = b.seed(200 + n as u64);
        let count = b.cfg.samples.phi_isometry;
        b.run(&id.clone(), PHI, |cfg| {
            let rep = build_gamma_rep(n)?;
            let sigma = rep.default_spinor();
            let mut worst: f64 = 0.0;
            for _ in 0..count {
                let h = random_sym(n, &mut rng);
                let k = random_sym(n, &mut rng);
                let ph = phi_map(&h, &sigma, &rep)?;
                let pk = phi_map(&k, &sigma, &rep)?;
                worst = worst.max((ph.inner(&pk) - h.inner(&k)).abs() / (h.inner(&h) * k.inner(&k)).sqrt());
                worst = worst.max((ph.norm_sqr() - h.inner(&h)).abs() / h.inner(&h));
            }
            Ok(vec![CheckRecord::at_most(id, PHI, worst, cfg.tol(1e-13))])
        });
    }

    for n in [4, 7] {
        let id = format!("phi_zero.n{n}");
        b.run(&id.clone(), SUSY, |_| {
            let rep = build_gamma_rep(n)?;
            let sigma = rep.default_spinor();
            let h = SymTensor::identity(n);
            let phi = phi_map(&h, &sigma, &rep)?;
            let zero = phi_map(&SymTensor::zeros(n), &sigma, &rep)?;
            Ok(vec![
                CheckRecord::equal(format!("phi_identity_norm.n{n}"), SUSY, phi.norm_sqr(), n as f64),
                CheckRecord::exact(id, SUSY, usize::from(!zero.is_zero())),
            ])
        });
    }

    for n in [4, 7] {
        let id = format!("spin_equivariance.n{n}");
        let mut rng = b.seed(300 + n as u64);
        let count = b.cfg.samples.equivariance;
        b.run(&id.clone(), PHI, |cfg| {
            let rep = build_gamma_rep(n)?;
            let sigma = rep.default_spinor();
            let mut worst: f64 = 0.0;
            for _ in 0..count {
                let planes: Vec<(usize, usize, f64)> = (0..3)
                    .map(|_| {
                        let a = rng.random_range(0..n);
                        let c = (a + rng.random_range(1..n)) % n;
                        (a, c, rng.random_range(-3.0..3.0))
                    })
                    .collect();
                let (s, q) = composite_rotation(&rep, &planes);
                let h = random_sym(n, &mut rng);
                worst = worst.max(spin_equivariance_residual(&rep, &h, &sigma, &s, &q)?);
            }
            Ok(vec![CheckRecord::at_most(id, PHI, worst, cfg.tol(1e-12))])
        });
    }

    for m in [1, 2] {
        let id = format!("cy_model.m{m}");
        let mut rng = b.seed(400 + m as u64);
        b.run(&id.clone(), CY, |cfg| {
            let (model, r) = cy_clifford_model(m, &mut rng)?;
            let mut formula: f64 = 0.0;
            for j in 0..2 * m {
                let alpha = DVector::from_fn(model.dim(), |_, _| {
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                });
                let mut x = vec![0.0; 2 * m];
                x[j] = 1.0;
                let lhs = model.to_orthonormal(&model.apply_formula(&x, &alpha));
                let rhs = model.clifford()[j].to_complex() * model.to_orthonormal(&alpha);
                formula = formula.max(cmax(&(lhs - rhs)));
            }
            Ok(vec![
                CheckRecord::exact(format!("{id}.relations"), CY, usize::from(!r.relations_exact)),
                CheckRecord::exact(format!("{id}.skew_adjoint"), CY, usize::from(!r.skew_adjoint_exact)),
                CheckRecord::at_most(format!("{id}.formula"), CY, formula, cfg.tol(1e-14)),
                CheckRecord::exact(format!("{id}.chirality"), CY_SPLIT, usize::from(!r.chirality_matches_degree)),
                CheckRecord::exact(format!("{id}.vacuum"), CY, usize::from(!r.vacuum_annihilated)),
                CheckRecord::at_most(format!("{id}.intertwiner"), CY, r.intertwiner_residual, cfg.tol(1e-12)),
                CheckRecord::at_most(format!("{id}.unitarity"), CY, r.intertwiner_unitarity, cfg.tol(1e-12)),
            ])
        });
    }
}
