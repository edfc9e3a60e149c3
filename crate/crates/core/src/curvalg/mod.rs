//! Pointwise algebraic curvature tensors.
//!
//! Index convention: `R_ijkl = ⟨R_{e_i e_j} e_k, e_l⟩` with
//! `R_{XY} = −∇_X∇_Y + ∇_Y∇_X + ∇_{[X,Y]}`, so the round sphere has
//! `R_1212 = +1`, `ricci_jl = Σ_i R_ijil` and `(R̊h)_ij = Σ_kl R_ikjl h_kl`.

mod bochner;
mod k3;

pub use bochner::{bochner_curvature_identity, BochnerReport};
pub use k3::{k3_from_block, k3_sample, self_dual_basis};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::clifford::{GammaRep, Spinor, SymTensor};
use crate::error::{Error, Result};

pub const SYMMETRY_TOL: f64 = 1e-12;
pub const RICCI_FLAT_TOL: f64 = 1e-12;
pub const SPIN_KERNEL_TOL: f64 = 1e-11;

#[derive(Clone, Debug, PartialEq)]
pub struct AlgCurvature {
    n: usize,
    r: Vec<f64>,
}

/// A named curvature identity and its largest violation.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryViolation {
    pub identity: &'static str,
    pub max_residual: f64,
}

#[inline]
fn idx(n: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * n + j) * n + k) * n + l
}

/// Largest residual of each curvature identity for a raw `n⁴` array.
pub fn symmetry_residuals(n: usize, r: &[f64]) -> Vec<SymmetryViolation> {
    let at = |i, j, k, l| r[idx(n, i, j, k, l)];
    let mut first = 0.0f64;
    let mut second = 0.0f64;
    let mut pair = 0.0f64;
    let mut bianchi = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = at(i, j, k, l);
                    first = first.max((v + at(j, i, k, l)).abs());
                    second = second.max((v + at(i, j, l, k)).abs());
                    pair = pair.max((v - at(k, l, i, j)).abs());
                    bianchi = bianchi.max((v + at(j, k, i, l) + at(k, i, j, l)).abs());
                }
            }
        }
    }
    vec![
        SymmetryViolation { identity: "R_ijkl = -R_jikl", max_residual: first },
        SymmetryViolation { identity: "R_ijkl = -R_ijlk", max_residual: second },
        SymmetryViolation { identity: "R_ijkl = R_klij", max_residual: pair },
        SymmetryViolation { identity: "R_ijkl + R_jkil + R_kijl = 0", max_residual: bianchi },
    ]
}

/// Validates the algebraic curvature symmetries of an `n⁴` array.
pub fn validate_curvature(n: usize, r: Vec<f64>) -> Result<AlgCurvature> {
    if r.len() != n.pow(4) {
        return Err(Error::DimensionMismatch { expected: n.pow(4), got: r.len() });
    }
    let scale = r.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let violated: Vec<String> = symmetry_residuals(n, &r)
        .into_iter()
        .filter(|v| v.max_residual > SYMMETRY_TOL * scale)
        .map(|v| format!("{} (max residual {:e})", v.identity, v.max_residual))
        .collect();
    if !violated.is_empty() {
        return Err(Error::CurvatureSymmetry(violated.join("; ")));
    }
    Ok(AlgCurvature { n, r })
}

impl AlgCurvature {
    pub fn zero(n: usize) -> Self {
        Self { n, r: vec![0.0; n.pow(4)] }
    }

    /// Constant sectional curvature `κ`: `R_ijkl = κ(δ_ik δ_jl − δ_il δ_jk)`.
    pub fn constant_curvature(n: usize, kappa: f64) -> Self {
        let mut r = vec![0.0; n.pow(4)];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    r[idx(n, i, j, i, j)] = kappa;
                    r[idx(n, i, j, j, i)] = -kappa;
                }
            }
        }
        Self { n, r }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.r[idx(self.n, i, j, k, l)]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.r
    }

    pub fn ricci(&self) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |j, l| (0..n).map(|i| self.get(i, j, i, l)).sum())
    }

    pub fn scalar(&self) -> f64 {
        self.ricci().trace()
    }

    pub fn is_ricci_flat(&self) -> bool {
        self.ricci().amax() <= RICCI_FLAT_TOL
    }

    /// `(R̊h)_ij = Σ_kl R_ikjl h_kl`.
    pub fn ring_h(&self, h: &SymTensor) -> Result<SymTensor> {
        let n = self.n;
        if h.n() != n {
            return Err(Error::DimensionMismatch { expected: n, got: h.n() });
        }
        let m = DMatrix::from_fn(n, n, |i, j| {
            let mut acc = 0.0;
            for k in 0..n {
                for l in 0..n {
                    acc += self.get(i, k, j, l) * h.get(k, l);
                }
            }
            acc
        });
        Ok(SymTensor::symmetrize(&m))
    }

    /// Unsymmetrized `R̊h`, for checking that the output is symmetric.
    pub fn ring_h_raw(&self, h: &SymTensor) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |i, j| {
            (0..n).flat_map(|k| (0..n).map(move |l| (k, l))).map(|(k, l)| self.get(i, k, j, l) * h.get(k, l)).sum()
        })
    }

    /// `ρ_kl = ¼ Σ_ij R_klij γ_i γ_j`, the spinor curvature endomorphism.
    pub fn spinor_action(&self, rep: &GammaRep, k: usize, l: usize) -> DMatrix<Complex64> {
        let d = rep.spin_dim();
        let mut out = DMatrix::<Complex64>::zeros(d, d);
        for i in 0..self.n {
            for j in 0..self.n {
                let c = self.get(k, l, i, j);
                if c != 0.0 {
                    out += (rep.gamma(i) * rep.gamma(j)) * Complex64::new(0.25 * c, 0.0);
                }
            }
        }
        out
    }

    /// All `ρ_kl` stacked vertically into an `(n² d) × d` matrix.
    pub fn stacked_spinor_action(&self, rep: &GammaRep) -> DMatrix<Complex64> {
        let n = self.n;
        let d = rep.spin_dim();
        let mut stacked = DMatrix::<Complex64>::zeros(n * n * d, d);
        for k in 0..n {
            for l in 0..n {
                let rho = self.spinor_action(rep, k, l);
                stacked.view_mut(((k * n + l) * d, 0), (d, d)).copy_from(&rho);
            }
        }
        stacked
    }

    /// Orthonormal basis of the joint kernel of all `ρ_kl`.
    pub fn spinor_kernel(&self, rep: &GammaRep) -> Vec<DVector<Complex64>> {
        let stacked = self.stacked_spinor_action(rep);
        let d = rep.spin_dim();
        // Kernel of A equals the kernel of the Hermitian d×d matrix A†A.
        let gram = stacked.adjoint() * &stacked;
        let eig = nalgebra::linalg::SymmetricEigen::new(gram);
        let top = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        (0..d)
            .filter(|&i| eig.eigenvalues[i].abs() <= 1e-20 * top.max(1.0) + 1e-22)
            .map(|i| eig.eigenvectors.column(i).into_owned())
            .collect()
    }
}

/// An algebraic curvature tensor together with a unit spinor annihilated by
/// every curvature endomorphism `ρ_kl`.
#[derive(Clone, Debug)]
pub struct SpinCompatibleCurvature {
    base: AlgCurvature,
    rep: GammaRep,
    sigma0: Spinor,
}

impl SpinCompatibleCurvature {
    /// Checks `Σ_ij R_klij γ_i γ_j σ₀ = 0` for all `k, l`.
    pub fn new(base: AlgCurvature, rep: GammaRep, sigma0: Spinor) -> Result<Self> {
        if rep.n() != base.n() {
            return Err(Error::DimensionMismatch { expected: base.n(), got: rep.n() });
        }
        let worst = max_kernel_residual(&base, &rep, &sigma0);
        if worst > SPIN_KERNEL_TOL {
            return Err(Error::Precondition(format!("σ₀ is not annihilated by the curvature (residual {worst:e})")));
        }
        Ok(Self { base, rep, sigma0 })
    }

    pub fn curvature(&self) -> &AlgCurvature {
        &self.base
    }

    pub fn rep(&self) -> &GammaRep {
        &self.rep
    }

    pub fn sigma0(&self) -> &Spinor {
        &self.sigma0
    }

    pub fn kernel_residual(&self) -> f64 {
        max_kernel_residual(&self.base, &self.rep, &self.sigma0)
    }
}

fn max_kernel_residual(r: &AlgCurvature, rep: &GammaRep, sigma: &Spinor) -> f64 {
    let n = r.n();
    let mut worst = 0.0f64;
    for k in 0..n {
        for l in 0..n {
            worst = worst.max((r.spinor_action(rep, k, l) * &sigma.0).norm());
        }
    }
    worst
}

/// `ρ_kl` for a spin-compatible curvature.
pub fn spinor_curvature_action(c: &SpinCompatibleCurvature, k: usize, l: usize) -> Result<DMatrix<Complex64>> {
    let n = c.base.n();
    if k >= n || l >= n {
        return Err(Error::DimensionMismatch { expected: n, got: k.max(l) + 1 });
    }
    Ok(c.base.spinor_action(&c.rep, k, l))
}

/// Largest `‖ρ_kl σ‖` over all index pairs.
pub fn max_spinor_action(r: &AlgCurvature, rep: &GammaRep, sigma: &Spinor) -> f64 {
    max_kernel_residual(r, rep, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::build_gamma_rep;
    use crate::rng::seeded;
    use rand::Rng;

    #[test]
    fn zero_is_valid_and_ricci_flat() {
        let r = validate_curvature(4, vec![0.0; 256]).unwrap();
        assert!(r.is_ricci_flat());
        assert_eq!(r.scalar(), 0.0);
    }

    #[test]
    fn round_two_sphere_pattern() {
        let r = AlgCurvature::constant_curvature(2, 1.0);
        let r = validate_curvature(2, r.as_slice().to_vec()).unwrap();
        assert_eq!(r.get(0, 1, 0, 1), 1.0);
        assert_eq!(r.ricci(), DMatrix::identity(2, 2));
    }

    #[test]
    fn sign_error_is_named() {
        let mut r = AlgCurvature::constant_curvature(2, 1.0).as_slice().to_vec();
        // R_1212 = R_1221 breaks the antisymmetry in the last pair
        r[idx(2, 0, 1, 1, 0)] = 1.0;
        let err = validate_curvature(2, r).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("R_ijkl = -R_ijlk"), "{msg}");
    }

    #[test]
    fn ring_h_zero_and_identity() {
        let z = AlgCurvature::zero(3);
        assert_eq!(z.ring_h(&SymTensor::identity(3)).unwrap(), SymTensor::zeros(3));
        let r = AlgCurvature::constant_curvature(4, 0.5);
        let out = r.ring_h(&SymTensor::identity(4)).unwrap();
        assert!((out.matrix() - r.ricci()).amax() < 1e-15);
    }

    #[test]
    fn ring_h_matches_four_loop_oracle() {
        let c = k3_sample(9).unwrap();
        let r = c.curvature();
        let mut rng = seeded(21);
        let h = SymTensor::symmetrize(&DMatrix::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0)));
        let out = r.ring_h(&h).unwrap();
        let mut oracle = [[0.0f64; 4]; 4];
        for (i, row) in oracle.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                for k in 0..4 {
                    for l in 0..4 {
                        *cell += r.as_slice()[((i * 4 + k) * 4 + j) * 4 + l] * h.matrix()[(k, l)];
                    }
                }
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                assert!((out.get(i, j) - oracle[i][j]).abs() < 1e-13);
            }
        }
        assert!((r.ring_h_raw(&h) - r.ring_h_raw(&h).transpose()).amax() < 1e-14);
    }

    #[test]
    fn zero_curvature_spinor_action_vanishes() {
        let rep = build_gamma_rep(4).unwrap();
        let z = AlgCurvature::zero(4);
        assert!(z.spinor_action(&rep, 0, 1).iter().all(|c| c.norm() == 0.0));
        assert_eq!(z.spinor_kernel(&rep).len(), 4);
    }

    #[test]
    fn round_sphere_is_not_spin_compatible() {
        let rep = build_gamma_rep(4).unwrap();
        let r = AlgCurvature::constant_curvature(4, 1.0);
        let s0 = rep.default_spinor();
        assert!(SpinCompatibleCurvature::new(r, rep, s0).is_err());
    }
}
