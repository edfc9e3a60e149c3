//! Curvature contractions appearing in the Bochner formula for `Φ(h)`.

use nalgebra::DVector;
use num_complex::Complex64;

use super::SpinCompatibleCurvature;
use crate::clifford::SymTensor;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BochnerReport {
    /// `‖½ Σ R_kljp h_ip γ_k γ_l γ_i σ₀ + 2 Σ_k (R̊h)_kj γ_k σ₀‖` for each `j`.
    pub first: Vec<f64>,
    /// `‖½ Σ R_klip γ_k γ_l γ_i σ₀‖` for each `p`.
    pub second: Vec<f64>,
}

impl BochnerReport {
    pub fn max_residual(&self) -> f64 {
        self.first.iter().chain(&self.second).fold(0.0, |m, &v| m.max(v))
    }
}

/// Evaluates both contraction identities for one symmetric tensor.
pub fn bochner_curvature_identity(c: &SpinCompatibleCurvature, h: &SymTensor) -> Result<BochnerReport> {
    let r = c.curvature();
    let n = r.n();
    if h.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: h.n() });
    }
    let rep = c.rep();
    let s0 = &c.sigma0().0;
    let d = rep.spin_dim();
    let single: Vec<DVector<Complex64>> = (0..n).map(|k| rep.gamma(k) * s0).collect();
    // γ_k γ_l γ_i σ₀ indexed by (k, l, i)
    let mut triple = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for l in 0..n {
            for i in 0..n {
                triple.push(rep.gamma(k) * (rep.gamma(l) * &single[i]));
            }
        }
    }
    let t = |k: usize, l: usize, i: usize| &triple[(k * n + l) * n + i];
    let ring = r.ring_h(h)?;

    let first = (0..n)
        .map(|j| {
            let mut acc = DVector::<Complex64>::zeros(d);
            for k in 0..n {
                for l in 0..n {
                    for i in 0..n {
                        let coeff: f64 = (0..n).map(|p| r.get(k, l, j, p) * h.get(i, p)).sum();
                        if coeff != 0.0 {
                            acc.axpy(Complex64::new(0.5 * coeff, 0.0), t(k, l, i), Complex64::new(1.0, 0.0));
                        }
                    }
                }
                acc.axpy(Complex64::new(2.0 * ring.get(k, j), 0.0), &single[k], Complex64::new(1.0, 0.0));
            }
            acc.norm()
        })
        .collect();

    let second = (0..n)
        .map(|p| {
            let mut acc = DVector::<Complex64>::zeros(d);
            for k in 0..n {
                for l in 0..n {
                    for i in 0..n {
                        let coeff = r.get(k, l, i, p);
                        if coeff != 0.0 {
                            acc.axpy(Complex64::new(0.5 * coeff, 0.0), t(k, l, i), Complex64::new(1.0, 0.0));
                        }
                    }
                }
            }
            acc.norm()
        })
        .collect();

    Ok(BochnerReport { first, second })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::build_gamma_rep;
    use crate::curvalg::{k3_sample, AlgCurvature};
    use crate::rng::seeded;
    use nalgebra::DMatrix;
    use rand::Rng;

    #[test]
    fn zero_curvature_exact() {
        let rep = build_gamma_rep(4).unwrap();
        let s0 = rep.default_spinor();
        let c = SpinCompatibleCurvature::new(AlgCurvature::zero(4), rep, s0).unwrap();
        let h = SymTensor::symmetrize(&DMatrix::from_fn(4, 4, |i, j| (i + 2 * j) as f64));
        let rep = bochner_curvature_identity(&c, &h).unwrap();
        assert_eq!(rep.max_residual(), 0.0);
    }

    #[test]
    fn k3_identity_and_random() {
        let c = k3_sample(4).unwrap();
        assert!(bochner_curvature_identity(&c, &SymTensor::identity(4)).unwrap().max_residual() <= 1e-10);
        let mut rng = seeded(8);
        for _ in 0..20 {
            let h = SymTensor::symmetrize(&DMatrix::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0)));
            let rep = bochner_curvature_identity(&c, &h).unwrap();
            assert!(rep.max_residual() <= 1e-10, "{rep:?}");
        }
    }

    #[test]
    fn identity_is_not_trivial_without_spin_compatibility() {
        // For a curvature that does not annihilate σ₀ the first contraction
        // no longer reduces to the R̊h term.
        let rep = build_gamma_rep(4).unwrap();
        let r = AlgCurvature::constant_curvature(4, 1.0);
        let s0 = rep.default_spinor();
        let c = SpinCompatibleCurvature { base: r, rep, sigma0: s0 };
        let h = SymTensor::symmetrize(&DMatrix::from_fn(4, 4, |i, j| if i == 0 && j == 1 { 1.0 } else { 0.0 }));
        assert!(bochner_curvature_identity(&c, &h).unwrap().max_residual() > 1e-3);
    }
}
