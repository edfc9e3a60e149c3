//! `G₂` fields on the flat torus `T⁷` with the constant structure.
//!
//! `𝕊 ⊗ T*M = T*M ⊕ (TM ⊗ T*M)`; a coefficient is an `8 × 7` complex
//! matrix whose column `j` is the spinor `(a, Y)` paired with `e^j`
//! (row 0 holds `a`, rows 1..8 hold `Y`).

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::forms::{Form, DIM};
use super::structure::{basis, G2Spinor, G2Structure};
use crate::error::{Error, Result};
use crate::torus::field::{FourierField, FourierSymTensor, Mode};
use crate::torus::flat::{constrained_fields, sym_basis};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn check_dim(h: &FourierSymTensor) -> Result<()> {
    if h.n() != DIM {
        return Err(Error::DimensionMismatch { expected: DIM, got: h.n() });
    }
    Ok(())
}

fn coeff_rows(h: &DMatrix<Complex64>) -> [[Complex64; DIM]; DIM] {
    std::array::from_fn(|i| std::array::from_fn(|j| h[(i, j)]))
}

/// `𝒟Φ(h) = Σ_k e_k · ∂_k Φ(h)` with `Φ(h) = (0, h_ij e_i ⊗ e^j)`, using
/// the Clifford action of the spinor model.
pub fn dirac_phi_by_action(g: &G2Structure, h: &FourierSymTensor) -> Result<FourierField<DMatrix<Complex64>>> {
    check_dim(h)?;
    Ok(h.map_modes(|_, k, hc| {
        let mut out = DMatrix::from_element(DIM + 1, DIM, zero());
        for j in 0..DIM {
            for (kk, &kv) in k.iter().enumerate() {
                if kv == 0.0 {
                    continue;
                }
                let y: [Complex64; DIM] = std::array::from_fn(|i| hc[(i, j)] * I * kv);
                let s = g.clifford(&basis::<Complex64>(kk), &G2Spinor { a: zero(), y });
                out[(0, j)] += s.a;
                for i in 0..DIM {
                    out[(1 + i, j)] += s.y[i];
                }
            }
        }
        out
    }))
}

/// The closed form `(δh, −h_{ij,k} P(e_i, e_k) ⊗ e^j)`.
pub fn dirac_phi_closed_form(g: &G2Structure, h: &FourierSymTensor) -> Result<FourierField<DMatrix<Complex64>>> {
    check_dim(h)?;
    Ok(h.map_modes(|_, k, hc| {
        let mut out = DMatrix::from_element(DIM + 1, DIM, zero());
        for j in 0..DIM {
            out[(0, j)] = -(0..DIM).map(|kk| I * k[kk] * hc[(kk, j)]).sum::<Complex64>();
            for i in 0..DIM {
                for kk in 0..DIM {
                    let d = I * k[kk] * hc[(i, j)];
                    if d == zero() {
                        continue;
                    }
                    let p = g.cross(&basis::<Complex64>(i), &basis::<Complex64>(kk));
                    for l in 0..DIM {
                        out[(1 + l, j)] -= d * p[l];
                    }
                }
            }
        }
        out
    }))
}

/// Largest coefficient difference between the two evaluations of `𝒟Φ(h)`.
pub fn dirac_phi_agreement(g: &G2Structure, h: &FourierSymTensor) -> Result<f64> {
    let a = dirac_phi_by_action(g, h)?;
    let b = dirac_phi_closed_form(g, h)?;
    Ok(a.max_coeff_diff(&b))
}

/// Fourier coefficients of a form-valued field.
pub type FormField = Vec<(Mode, Vec<f64>, Form<Complex64>)>;

pub fn psi_field(g: &G2Structure, h: &FourierSymTensor) -> Result<FormField> {
    check_dim(h)?;
    Ok(h.iter().map(|(m, hc)| (m.clone(), h.wavevector(m), super::decomp::psi(g, &coeff_rows(hc)))).collect())
}

/// `dω = Σ_k e^k ∧ ∂_k ω`.
pub fn exterior_d(f: &FormField) -> FormField {
    f.iter()
        .map(|(m, k, w)| {
            let kf: Vec<Complex64> = k.iter().map(|&v| I * v).collect();
            (m.clone(), k.clone(), Form::one_form(&kf).wedge(w))
        })
        .collect()
}

/// `d*ω = −Σ_k e_k ⌟ ∂_k ω`.
pub fn codifferential(f: &FormField) -> FormField {
    f.iter()
        .map(|(m, k, w)| {
            let kf: Vec<Complex64> = k.iter().map(|&v| -I * v).collect();
            (m.clone(), k.clone(), w.interior(&kf))
        })
        .collect()
}

pub fn star_field(f: &FormField) -> FormField {
    f.iter().map(|(m, k, w)| (m.clone(), k.clone(), w.star())).collect()
}

pub fn max_form_coeff(f: &FormField) -> f64 {
    f.iter().flat_map(|(_, _, w)| w.coeffs().iter().map(|c| c.norm())).fold(0.0, f64::max)
}

/// Residuals of the two harmonicity computations for `Ψ(h)`, valid for
/// every `h`:
///
/// * `d*Ψ(h) = (δh)^♯ ⌟ φ + h_{ij,k} e^i ∧ P(e_j, e_k)^*`
/// * `*dΨ(h) = −h_{ii,k} e_k ⌟ *φ + h_{ik,k} e_i ⌟ *φ − h_{ij,k} e^j ∧ (e_k ⌟ e_i ⌟ *φ)`
/// * `h_{ij,k} e^j ∧ (e_k ⌟ e_i ⌟ *φ) = h_{ij,k} e^j ∧ (P(e_i, e_k) ⌟ φ) − h_{ij,k} e^j ∧ e^i ∧ e^k`
#[derive(Clone, Copy, Debug)]
pub struct HarmonicChain {
    pub codifferential: f64,
    pub star_d: f64,
    pub cross_step: f64,
}

pub fn harmonic_chain(g: &G2Structure, h: &FourierSymTensor) -> Result<HarmonicChain> {
    let psi = psi_field(g, h)?;
    let lhs_codiff = codifferential(&psi);
    let lhs_star_d = star_field(&exterior_d(&psi));
    let phi: Form<Complex64> = g.phi_as();
    let star_phi: Form<Complex64> = g.star_phi_as();
    let mut codiff = 0.0f64;
    let mut star_d = 0.0f64;
    let mut cross_step = 0.0f64;
    for (((m, k, _), (_, _, a)), (_, _, b)) in psi.iter().zip(&lhs_codiff).zip(&lhs_star_d) {
        let hc = h.get(m).expect("mode of h");
        let dh = |i: usize, j: usize, kk: usize| I * k[kk] * hc[(i, j)];
        let delta: Vec<Complex64> = (0..DIM).map(|j| -(0..DIM).map(|kk| dh(kk, j, kk)).sum::<Complex64>()).collect();
        let mut rhs = phi.interior(&delta);
        let mut t1 = Form::zero();
        let mut t2 = Form::zero();
        let mut t3 = Form::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                for kk in 0..DIM {
                    let d = dh(i, j, kk);
                    if d == zero() {
                        continue;
                    }
                    let p = g.cross(&basis::<Complex64>(j), &basis::<Complex64>(kk));
                    rhs = rhs.add(&Form::one_form(&basis::<Complex64>(i)).wedge(&Form::one_form(&p)).scale(d));
                    let ej = Form::one_form(&basis::<Complex64>(j));
                    t1 = t1.add(&ej.wedge(&star_phi.interior_basis(i).interior_basis(kk)).scale(d));
                    let pik = g.cross(&basis::<Complex64>(i), &basis::<Complex64>(kk));
                    t2 = t2.add(&ej.wedge(&phi.interior(&pik)).scale(d));
                    let ei = Form::one_form(&basis::<Complex64>(i));
                    let ek = Form::one_form(&basis::<Complex64>(kk));
                    t3 = t3.add(&ej.wedge(&ei).wedge(&ek).scale(d));
                }
            }
        }
        codiff = codiff.max(a.sub(&rhs).coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max));
        let trace_grad: Vec<Complex64> = (0..DIM).map(|kk| (0..DIM).map(|i| dh(i, i, kk)).sum()).collect();
        let div: Vec<Complex64> = (0..DIM).map(|i| (0..DIM).map(|kk| dh(i, kk, kk)).sum()).collect();
        let rhs_sd = star_phi.interior(&div).sub(&star_phi.interior(&trace_grad)).sub(&t1);
        star_d = star_d.max(b.sub(&rhs_sd).coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max));
        cross_step = cross_step.max(t1.sub(&t2.sub(&t3)).coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max));
    }
    Ok(HarmonicChain { codifferential: codiff, star_d, cross_step })
}

/// Symbol of `h ↦ (tr h, δh, h_{ij,k} P(e_i, e_k) ⊗ e^j)` on the
/// coordinates of [`sym_basis`].
fn constraint_symbol(g: &G2Structure, k: &[f64], basis: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    let rows = 1 + DIM + DIM * DIM;
    let mut m = DMatrix::from_element(rows, basis.len(), zero());
    for (col, e) in basis.iter().enumerate() {
        m[(0, col)] = e.trace();
        for j in 0..DIM {
            m[(1 + j, col)] = -(0..DIM).map(|kk| I * k[kk] * e[(kk, j)]).sum::<Complex64>();
            for i in 0..DIM {
                for kk in 0..DIM {
                    let d = I * k[kk] * e[(i, j)];
                    if d == zero() {
                        continue;
                    }
                    let p = g.cross(&basis_c(i), &basis_c(kk));
                    for l in 0..DIM {
                        m[(1 + DIM + j * DIM + l, col)] += d * p[l];
                    }
                }
            }
        }
    }
    m
}

fn basis_c(i: usize) -> [Complex64; DIM] {
    basis(i)
}

/// Orthonormal basis of the fields with `tr h = 0`, `δh = 0` and
/// `h_{ij,k} P(e_i, e_k) = 0`, solved mode by mode.
pub fn constrained_g2_fields(g: &G2Structure, cutoff: usize) -> Result<Vec<FourierSymTensor>> {
    let basis = sym_basis(DIM);
    constrained_fields(DIM, cutoff, |k| constraint_symbol(g, k, &basis))
}

/// `max(‖dΨ(h)‖, ‖d*Ψ(h)‖)` in the largest Fourier coefficient.
pub fn harmonicity_residual(g: &G2Structure, h: &FourierSymTensor) -> Result<f64> {
    let psi = psi_field(g, h)?;
    Ok(max_form_coeff(&exterior_d(&psi)) + max_form_coeff(&codifferential(&psi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn dph_two_methods_agree() {
        let g = G2Structure::new().unwrap();
        let mut rng = seeded(5);
        let h = FourierSymTensor::random(7, 2, 6, 1.0, &mut rng);
        assert!(dirac_phi_agreement(&g, &h).unwrap() < 1e-12);
        let mut a = DMatrix::zeros(7, 7);
        a[(0, 1)] = 1.0;
        a[(1, 0)] = 1.0;
        a[(2, 2)] = 0.5;
        let single = FourierSymTensor::cos_mode(vec![1, 0, 2, 0, 0, -1, 0], &a).unwrap();
        assert!(dirac_phi_agreement(&g, &single).unwrap() < 1e-12);
        let constant = FourierSymTensor::constant(&a);
        assert_eq!(dirac_phi_by_action(&g, &constant).unwrap().max_coeff(), 0.0);
    }

    #[test]
    fn chain_identities_for_generic_fields() {
        let g = G2Structure::new().unwrap();
        let mut rng = seeded(6);
        let h = FourierSymTensor::random(7, 1, 5, 1.0, &mut rng);
        let c = harmonic_chain(&g, &h).unwrap();
        assert!(c.codifferential < 1e-12 && c.star_d < 1e-12 && c.cross_step < 1e-12, "{c:?}");
    }

    #[test]
    fn constrained_fields_are_harmonic() {
        let g = G2Structure::new().unwrap();
        let fields = constrained_g2_fields(&g, 1).unwrap();
        assert_eq!(fields.len(), 27);
        for f in &fields {
            assert!(harmonicity_residual(&g, f).unwrap() < 1e-12);
        }
    }
}
