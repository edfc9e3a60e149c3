//! The Dirac operator of the flat complex torus `T^{2m}` on `Λ^{0,•}`
//! compared with `√2(∂̄ + ∂̄†)`.
//!
//! Fields are band-limited sections of `⊕_k Λ^{0,k}` with coefficients in
//! the orthonormal basis `ε^I`. The Dirac operator is assembled from the
//! pointwise Clifford formula applied to derivative coefficients in the
//! `dz̄^I` basis; `∂̄` is assembled independently from its symbol
//! `∂/∂z̄_a = ½(∂_{x_a} + i ∂_{y_a})` and `∂̄†` is its adjoint.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use super::field::{check_cutoff, modes_in_box, Mode};
use crate::clifford::CyModel;
use crate::error::{Error, Result};
use crate::util::cmax;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Maximum complex dimension accepted by the torus check.
pub const MAX_TORUS_M: usize = 2;

/// Field of `(0,•)`-forms on `T^{2m}` with unit scales.
#[derive(Clone, Debug)]
pub struct FormField {
    pub m: usize,
    pub cutoff: usize,
    /// Orthonormal-basis coefficients per mode.
    pub coeffs: Vec<(Mode, DVector<Complex64>)>,
}

impl FormField {
    pub fn random(m: usize, cutoff: usize, count: usize, rng: &mut impl Rng) -> Result<Self> {
        check_range(m)?;
        check_cutoff(2 * m, cutoff)?;
        let modes = modes_in_box(2 * m, cutoff);
        let dim = 1 << m;
        let coeffs = (0..count)
            .map(|_| {
                let mode = modes[rng.random_range(0..modes.len())].clone();
                let v = DVector::from_fn(dim, |_, _| {
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                });
                (mode, v)
            })
            .collect();
        Ok(Self { m, cutoff, coeffs })
    }

    pub fn single(m: usize, mode: Mode, coeff: DVector<Complex64>) -> Result<Self> {
        check_range(m)?;
        if mode.len() != 2 * m || coeff.len() != 1 << m {
            return Err(Error::DimensionMismatch { expected: 2 * m, got: mode.len() });
        }
        let cutoff = mode.iter().map(|v| v.unsigned_abs() as usize).max().unwrap_or(0);
        Ok(Self { m, cutoff, coeffs: vec![(mode, coeff)] })
    }
}

fn check_range(m: usize) -> Result<()> {
    if !(1..=MAX_TORUS_M).contains(&m) {
        return Err(Error::DimensionOutOfRange { n: m, min: 1, max: MAX_TORUS_M });
    }
    Ok(())
}

/// Residuals of `D − √2(∂̄ + ∂̄†)` and of the literal `D − √2(∂̄ − ∂̄†)`,
/// each relative to the largest coefficient of `Dα`.
#[derive(Clone, Copy, Debug)]
pub struct CyDiracReport {
    pub m: usize,
    pub modes: usize,
    pub dirac_norm: f64,
    pub plus_residual: f64,
    pub minus_residual: f64,
}

/// Symbol of `D` in the orthonormal basis at integer wavevector `k`.
pub fn dirac_symbol(model: &CyModel, k: &[f64]) -> DMatrix<Complex64> {
    let dim = model.dim();
    let to_dz = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(2f64.powf(-(model.degree(i) as f64) / 2.0), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut out = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut e = DVector::zeros(dim);
        e[col] = Complex64::new(1.0, 0.0);
        let alpha = &to_dz * e;
        let mut acc = DVector::zeros(dim);
        for (j, &kj) in k.iter().enumerate() {
            if kj == 0.0 {
                continue;
            }
            let mut x = vec![0.0; 2 * model.m()];
            x[j] = 1.0;
            acc += model.apply_formula(&x, &(&alpha * (I * kj)));
        }
        out.set_column(col, &model.to_orthonormal(&acc));
    }
    out
}

/// Symbol of `√2 ∂̄` in the orthonormal basis.
pub fn dbar_symbol(model: &CyModel, k: &[f64]) -> DMatrix<Complex64> {
    let dim = model.dim();
    let mut out = DMatrix::zeros(dim, dim);
    for a in 0..model.m() {
        // ∂/∂z̄_a ↦ ½(i k_x − k_y); dz̄_a ∧ = √2 ε_a ∧.
        let sym = 0.5 * (I * k[2 * a] - k[2 * a + 1]);
        out += model.wedge(a).to_complex() * (sym * std::f64::consts::SQRT_2);
    }
    out * Complex64::new(std::f64::consts::SQRT_2, 0.0)
}

pub fn cy_dirac_check(field: &FormField) -> Result<CyDiracReport> {
    let model = CyModel::new(field.m)?;
    let mut dirac_norm = 0.0f64;
    let mut plus = 0.0f64;
    let mut minus = 0.0f64;
    for (mode, alpha) in &field.coeffs {
        let k: Vec<f64> = mode.iter().map(|&v| v as f64).collect();
        let d = dirac_symbol(&model, &k) * alpha;
        let dbar = dbar_symbol(&model, &k);
        let dbar_adj = dbar.adjoint();
        let p = (&dbar + &dbar_adj) * alpha;
        let q = (&dbar - &dbar_adj) * alpha;
        dirac_norm = dirac_norm.max(cmax(&d));
        plus = plus.max(cmax(&(&d - p)));
        minus = minus.max(cmax(&(&d - q)));
    }
    let scale = dirac_norm.max(1.0);
    Ok(CyDiracReport {
        m: field.m,
        modes: field.coeffs.len(),
        dirac_norm,
        plus_residual: plus / scale,
        minus_residual: minus / scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_zero_form() {
        let f = FormField::single(1, vec![0, 0], DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)])).unwrap();
        let r = cy_dirac_check(&f).unwrap();
        assert_eq!(r.dirac_norm, 0.0);
        assert_eq!(r.plus_residual, 0.0);
    }

    #[test]
    fn single_mode_on_t2() {
        let f = FormField::single(1, vec![1, 0], DVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)])).unwrap();
        let r = cy_dirac_check(&f).unwrap();
        assert!(r.dirac_norm > 0.5);
        assert!(r.plus_residual < 1e-12);
    }

    #[test]
    fn random_fields_m2() {
        let mut rng = seeded(17);
        let f = FormField::random(2, 3, 40, &mut rng).unwrap();
        let r = cy_dirac_check(&f).unwrap();
        assert!(r.plus_residual < 1e-12, "{r:?}");
        assert!(r.minus_residual > 0.1);
    }

    #[test]
    fn dirac_squares_to_laplacian() {
        let model = CyModel::new(2).unwrap();
        let k = [1.0, -2.0, 0.0, 3.0];
        let d = dirac_symbol(&model, &k);
        let lap = DMatrix::<Complex64>::identity(4, 4) * c(14.0, 0.0);
        assert!(crate::util::cmax(&(&d * &d - lap)) < 1e-12);
    }
}
