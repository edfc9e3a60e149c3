//! Ricci-flat curvature samples in dimension four with a kernel spinor.

use nalgebra::{DMatrix, Matrix3};
use rand::Rng;

use super::{AlgCurvature, SpinCompatibleCurvature};
use crate::clifford::{build_gamma_rep, Spinor};
use crate::error::{Error, Result};
use crate::rng::seeded;

/// Expected dimension of the joint kernel of `{ρ_kl}` for a nonzero
/// self-dual Weyl block: one half-spin space.
pub const K3_KERNEL_DIM: usize = 2;

/// Orthonormal basis of `Λ⁺` for the orientation `e^{1234}`, as
/// antisymmetric matrices with `(ω)_ij = ω(e_i, e_j)`.
pub fn self_dual_basis() -> [DMatrix<f64>; 3] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let form = |pairs: [(usize, usize, f64); 2]| {
        let mut m = DMatrix::zeros(4, 4);
        for (i, j, c) in pairs {
            m[(i, j)] = c * s;
            m[(j, i)] = -c * s;
        }
        m
    };
    [form([(0, 1, 1.0), (2, 3, 1.0)]), form([(0, 2, 1.0), (1, 3, -1.0)]), form([(0, 3, 1.0), (1, 2, 1.0)])]
}

/// Curvature operator equal to `block` on `Λ⁺` and zero on `Λ⁻`.
pub fn curvature_from_block(block: &Matrix3<f64>) -> AlgCurvature {
    let basis = self_dual_basis();
    let mut r = vec![0.0; 256];
    for a in 0..3 {
        for b in 0..3 {
            let w = block[(a, b)];
            if w == 0.0 {
                continue;
            }
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        for l in 0..4 {
                            r[((i * 4 + j) * 4 + k) * 4 + l] += w * basis[a][(i, j)] * basis[b][(k, l)];
                        }
                    }
                }
            }
        }
    }
    // Symmetrize in the pairs so that rounding cannot break pair symmetry.
    let mut sym = r.clone();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    sym[((i * 4 + j) * 4 + k) * 4 + l] =
                        0.5 * (r[((i * 4 + j) * 4 + k) * 4 + l] + r[((k * 4 + l) * 4 + i) * 4 + j]);
                }
            }
        }
    }
    AlgCurvature { n: 4, r: sym }
}

/// Builds the spin-compatible curvature for a traceless symmetric block.
pub fn k3_from_block(block: &Matrix3<f64>) -> Result<SpinCompatibleCurvature> {
    let rep = build_gamma_rep(4)?;
    let sym = (block + block.transpose()) * 0.5;
    let traceless = sym - Matrix3::identity() * (sym.trace() / 3.0);
    let r = curvature_from_block(&traceless);
    let kernel = r.spinor_kernel(&rep);
    let zero_block = traceless.amax() == 0.0;
    let expected = if zero_block { rep.spin_dim() } else { K3_KERNEL_DIM };
    if kernel.len() != expected {
        return Err(Error::KernelDimension { found: kernel.len(), expected });
    }
    let sigma0 = Spinor(kernel[0].clone()).normalized();
    SpinCompatibleCurvature::new(r, rep, sigma0)
}

/// Random traceless symmetric Weyl block with entries of order one.
pub fn random_block(rng: &mut impl Rng) -> Matrix3<f64> {
    let m = Matrix3::from_fn(|_, _| rng.random_range(-1.0..1.0));
    let s = (m + m.transpose()) * 0.5;
    s - Matrix3::identity() * (s.trace() / 3.0)
}

/// Seeded K3-type sample.
pub fn k3_sample(seed: u64) -> Result<SpinCompatibleCurvature> {
    let mut rng = seeded(seed);
    k3_from_block(&random_block(&mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvalg::{symmetry_residuals, validate_curvature};
    use nalgebra::DVector;
    use num_complex::Complex64;

    #[test]
    fn basis_is_self_dual_and_orthonormal() {
        let b = self_dual_basis();
        for a in 0..3 {
            for c in 0..3 {
                // ⟨ω_a, ω_c⟩ over i<j equals half the Frobenius product.
                let ip = 0.5 * b[a].dot(&b[c]);
                assert!((ip - if a == c { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
            let w = &b[a];
            // *(e_01) = e_23, *(e_02) = -e_13, *(e_03) = e_12
            assert!((w[(0, 1)] - w[(2, 3)]).abs() < 1e-15);
            assert!((w[(0, 2)] + w[(1, 3)]).abs() < 1e-15);
            assert!((w[(0, 3)] - w[(1, 2)]).abs() < 1e-15);
        }
    }

    #[test]
    fn diag_block_kernel_and_ricci() {
        let c = k3_from_block(&Matrix3::from_diagonal(&nalgebra::Vector3::new(2.0, -1.0, -1.0))).unwrap();
        assert!(c.curvature().ricci().amax() <= 1e-14);
        assert_eq!(c.curvature().spinor_kernel(c.rep()).len(), 2);
        assert!(c.kernel_residual() <= 1e-11);
    }

    #[test]
    fn zero_block_gives_zero_curvature() {
        let c = k3_from_block(&Matrix3::zeros()).unwrap();
        assert!(c.curvature().as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn seeded_sample_is_valid() {
        let c = k3_sample(1).unwrap();
        let res = symmetry_residuals(4, c.curvature().as_slice());
        assert!(res.iter().all(|v| v.max_residual < 1e-15), "{res:?}");
        validate_curvature(4, c.curvature().as_slice().to_vec()).unwrap();
        assert!(c.curvature().is_ricci_flat());
        assert!(c.kernel_residual() <= 1e-11);
        assert_eq!(c.sigma0().norm().round(), 1.0);
    }

    #[test]
    fn generic_spinor_is_not_annihilated() {
        let c = k3_sample(1).unwrap();
        let sigma = Spinor(DVector::from_fn(4, |i, _| Complex64::new(1.0 + i as f64, 0.5)).normalize());
        assert!(super::super::max_spinor_action(c.curvature(), c.rep(), &sigma) > 1e-3);
    }
}
