//! Operators on the flat torus, applied mode by mode.
//!
//! On a flat torus every constant-coefficient operator is a Fourier
//! multiplier, so `∇*∇`, `δ`, the twisted Dirac operator `𝒟` and the
//! transverse-traceless splitting are evaluated exactly per mode.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{
    is_canonical, is_zero_mode, modes_in_box, negate, FourierField, FourierScalarField, FourierSymTensor, Mode,
};
use super::grid::Grid;
use crate::clifford::{GammaRep, Spinor};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn k_sqr(k: &[f64]) -> f64 {
    k.iter().map(|v| v * v).sum()
}

/// Section of `S ⊗ T*M` on a torus: each coefficient is a `d × n` matrix
/// whose column `j` is the spinor paired with `e^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedSpinorField {
    field: FourierField<DMatrix<Complex64>>,
    spin_dim: usize,
}

impl TwistedSpinorField {
    pub fn field(&self) -> &FourierField<DMatrix<Complex64>> {
        &self.field
    }

    pub fn spin_dim(&self) -> usize {
        self.spin_dim
    }

    pub fn l2_inner(&self, other: &Self) -> f64 {
        self.field.l2_inner(&other.field)
    }

    pub fn l2_norm_sqr(&self) -> f64 {
        self.field.l2_norm_sqr()
    }

    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        self.field.max_coeff_diff(&other.field)
    }

    pub fn max_coeff(&self) -> f64 {
        self.field.max_coeff()
    }
}

/// Pointwise `Φ` applied to every Fourier coefficient.
pub fn phi_field(h: &FourierSymTensor, sigma0: &Spinor, rep: &GammaRep) -> Result<TwistedSpinorField> {
    let n = rep.n();
    if h.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: h.n() });
    }
    let images: Vec<DVector<Complex64>> = rep.gammas().iter().map(|g| g * &sigma0.0).collect();
    let d = rep.spin_dim();
    let field = h.map_modes(|_, _, hc| DMatrix::from_fn(d, n, |s, j| (0..n).map(|i| hc[(i, j)] * images[i][s]).sum()));
    Ok(TwistedSpinorField { field, spin_dim: d })
}

/// `𝒟 = Σ_k γ_k ∂_k` on the spinor factor, identity on the coframe factor.
pub fn twisted_dirac(phi: &TwistedSpinorField, rep: &GammaRep) -> TwistedSpinorField {
    let field = phi.field.map_modes(|_, k, coeff| dirac_symbol(rep, k) * coeff);
    TwistedSpinorField { field, spin_dim: phi.spin_dim }
}

/// Symbol `i Σ_k k_k γ_k` of the untwisted Dirac operator.
pub fn dirac_symbol(rep: &GammaRep, k: &[f64]) -> DMatrix<Complex64> {
    let d = rep.spin_dim();
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    for (a, &ka) in k.iter().enumerate() {
        if ka != 0.0 {
            out += rep.gamma(a) * (I * ka);
        }
    }
    out
}

/// `∇_a` of a twisted spinor field (flat connection).
pub fn nabla_twisted(phi: &TwistedSpinorField, a: usize) -> TwistedSpinorField {
    let field = phi.field.map_modes(|_, k, coeff| coeff * (I * k[a]));
    TwistedSpinorField { field, spin_dim: phi.spin_dim }
}

/// `∇_a h` on the flat torus.
pub fn nabla_sym(h: &FourierSymTensor, a: usize) -> FourierSymTensor {
    h.map_modes(|_, k, coeff| coeff * (I * k[a]))
}

/// Flat rough Laplacian `∇*∇h`, symbol `|k|²`.
pub fn rough_laplacian(h: &FourierSymTensor) -> FourierSymTensor {
    h.map_modes(|_, k, coeff| coeff * c(k_sqr(k)))
}

/// Flat Lichnerowicz Laplacian; the curvature term vanishes.
pub fn lichnerowicz_flat(h: &FourierSymTensor) -> FourierSymTensor {
    rough_laplacian(h)
}

/// `(δh)_j = −Σ_i ∂_i h_ij`, returned as an `n × 1` coefficient field.
pub fn divergence(h: &FourierSymTensor) -> FourierField<DMatrix<Complex64>> {
    let n = h.n();
    h.map_modes(|_, k, coeff| {
        DMatrix::from_fn(n, 1, |j, _| -(0..n).map(|i| I * k[i] * coeff[(i, j)]).sum::<Complex64>())
    })
}

/// `δ*ω = sym ∂ω` for an `n × 1` coefficient field.
pub fn delta_star(w: &FourierField<DMatrix<Complex64>>) -> FourierSymTensor {
    let n = w.n();
    w.map_modes(|_, k, wc| DMatrix::from_fn(n, n, |i, j| 0.5 * I * (k[i] * wc[(j, 0)] + k[j] * wc[(i, 0)])))
}

/// `L_X δ = ∂_i X_j + ∂_j X_i` for a vector field given as `n × 1` coefficients.
pub fn lie_derivative(x: &FourierField<DMatrix<Complex64>>) -> FourierSymTensor {
    delta_star(x).scale(2.0)
}

/// `⟨𝓛h, h⟩_{L²}`.
pub fn lichnerowicz_form(h: &FourierSymTensor) -> f64 {
    lichnerowicz_flat(h).l2_inner(h)
}

/// Rayleigh quotient `⟨𝓛h, h⟩ / ‖h‖²`.
pub fn rayleigh(h: &FourierSymTensor) -> f64 {
    lichnerowicz_form(h) / h.l2_norm_sqr()
}

/// The splitting `h = h̄ + L_X δ + u δ` with `h̄` transverse traceless.
#[derive(Clone, Debug)]
pub struct TtDecomposition {
    pub h_bar: FourierSymTensor,
    pub h1: FourierSymTensor,
    pub h2: FourierSymTensor,
    pub x: FourierField<DMatrix<Complex64>>,
    pub u: FourierScalarField,
}

pub fn tt_project(h: &FourierSymTensor) -> TtDecomposition {
    let n = h.n();
    let nf = n as f64;
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut parts: Vec<(Mode, DMatrix<Complex64>, DMatrix<Complex64>, Complex64)> = Vec::new();
    for (m, hc) in h.iter() {
        let k = h.wavevector(m);
        let kk = k_sqr(&k);
        if is_zero_mode(m) || kk == 0.0 {
            let u = hc.trace() / nf;
            parts.push((m.clone(), hc - &id * u, DMatrix::zeros(n, 1), u));
            continue;
        }
        let kv = DMatrix::from_fn(n, 1, |i, _| c(k[i]));
        let p = &id - (&kv * kv.transpose()) * c(1.0 / kk);
        let php = &p * hc * &p;
        let h_bar = &php - &p * (php.trace() / (nf - 1.0));
        let r = hc - &h_bar;
        let u = (&p * &r * &p).trace() / (nf - 1.0);
        let ru = &r - &id * u;
        let rk = &ru * &kv;
        let yk = (kv.transpose() * &rk)[(0, 0)] / (2.0 * kk);
        let y = (&rk - &kv * yk) * c(1.0 / kk);
        parts.push((m.clone(), h_bar, y * (-I), u));
    }
    let mut h_bar = FourierSymTensor::from_parts(n, h.cutoff(), h.scales().to_vec(), Default::default());
    let mut x = FourierField::<DMatrix<Complex64>>::from_parts(n, h.cutoff(), h.scales().to_vec(), Default::default());
    let mut u = FourierScalarField::from_parts(n, h.cutoff(), h.scales().to_vec(), Default::default());
    for (m, hb, xm, um) in parts {
        h_bar.set(m.clone(), hb).expect("mode from input");
        x.set(m.clone(), xm).expect("mode from input");
        u.set(m, um).expect("mode from input");
    }
    let h1 = lie_derivative(&x);
    let h2 = FourierSymTensor::conformal(&u);
    TtDecomposition { h_bar, h1, h2, x, u }
}

/// Orthonormal basis (for the mean-square inner product) of
/// `{h : tr h = 0, δh = 0, 𝒟Φ(h) = 0}` among fields with modes up to `cutoff`.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    pub n: usize,
    pub cutoff: usize,
    pub tensors: Vec<FourierSymTensor>,
}

impl KernelBasis {
    pub fn dimension(&self) -> usize {
        self.tensors.len()
    }
}

/// Orthonormal coordinates on complex symmetric matrices: `E_ii` and
/// `(E_ij + E_ji)/√2`.
pub(crate) fn sym_basis(n: usize) -> Vec<DMatrix<Complex64>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            let mut e = DMatrix::zeros(n, n);
            if i == j {
                e[(i, i)] = c(1.0);
            } else {
                e[(i, j)] = c(s);
                e[(j, i)] = c(s);
            }
            out.push(e);
        }
    }
    out
}

/// Stacked symbol of `h ↦ (tr h, δh, 𝒟Φ(h))` at wavevector `k`.
fn kernel_constraints(k: &[f64], rep: &GammaRep, sigma0: &Spinor, basis: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    let n = rep.n();
    let d = rep.spin_dim();
    let dirac = dirac_symbol(rep, k);
    let images: Vec<DVector<Complex64>> = rep.gammas().iter().map(|g| g * &sigma0.0).collect();
    let rows = 1 + n + n * d;
    let mut m = DMatrix::<Complex64>::zeros(rows, basis.len());
    for (col, e) in basis.iter().enumerate() {
        m[(0, col)] = e.trace();
        for j in 0..n {
            m[(1 + j, col)] = -(0..n).map(|i| I * k[i] * e[(i, j)]).sum::<Complex64>();
        }
        for j in 0..n {
            let phi: DVector<Complex64> = (0..n).fold(DVector::zeros(d), |acc, i| acc + &images[i] * e[(i, j)]);
            let v = &dirac * phi;
            for s in 0..d {
                m[(1 + n + j * d + s, col)] = v[s];
            }
        }
    }
    m
}

/// Real null space of the constraints on a real field whose coefficient
/// at `k` is `a + i b` and at `−k` is `a − i b`. `plus` and `minus` are the
/// constraint symbols at `k` and `−k`; with `minus = None` the mode is
/// `k = 0` and only real `a` is allowed.
fn real_null_space(
    plus: &DMatrix<Complex64>,
    minus: Option<&DMatrix<Complex64>>,
    tol: f64,
) -> Vec<(DVector<f64>, DVector<f64>)> {
    let (rows, p) = plus.shape();
    let re = plus.map(|z| z.re);
    let im = plus.map(|z| z.im);
    let real_only = minus.is_none();
    let big = match minus {
        None => {
            let mut b = DMatrix::zeros(2 * rows, p);
            b.view_mut((0, 0), (rows, p)).copy_from(&re);
            b.view_mut((rows, 0), (rows, p)).copy_from(&im);
            b
        }
        Some(minus) => {
            let mre = minus.map(|z| z.re);
            let mim = minus.map(|z| z.im);
            let mut b = DMatrix::zeros(4 * rows, 2 * p);
            b.view_mut((0, 0), (rows, p)).copy_from(&re);
            b.view_mut((0, p), (rows, p)).copy_from(&(-&im));
            b.view_mut((rows, 0), (rows, p)).copy_from(&im);
            b.view_mut((rows, p), (rows, p)).copy_from(&re);
            b.view_mut((2 * rows, 0), (rows, p)).copy_from(&mre);
            b.view_mut((2 * rows, p), (rows, p)).copy_from(&mim);
            b.view_mut((3 * rows, 0), (rows, p)).copy_from(&mim);
            b.view_mut((3 * rows, p), (rows, p)).copy_from(&(-&mre));
            b
        }
    };
    let cols = big.ncols();
    let svd = big.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let top = svd.singular_values.iter().fold(1.0f64, |a, v| a.max(*v));
    (0..cols)
        .filter(|&i| svd.singular_values[i] <= tol * top)
        .map(|i| {
            let v = v_t.row(i).transpose();
            if real_only {
                (v, DVector::zeros(p))
            } else {
                (v.rows(0, p).into_owned(), v.rows(p, p).into_owned())
            }
        })
        .collect()
}

pub fn kernel_basis(n: usize, cutoff: usize, rep: &GammaRep, sigma0: &Spinor) -> Result<KernelBasis> {
    if rep.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: rep.n() });
    }
    let basis = sym_basis(n);
    let tensors = constrained_fields(n, cutoff, |k| kernel_constraints(k, rep, sigma0, &basis))?;
    Ok(KernelBasis { n, cutoff, tensors })
}

/// Orthonormal basis of the real symmetric fields with modes up to
/// `cutoff` that satisfy a linear constraint given by its symbol.
/// `symbol(k)` maps the coordinates of [`sym_basis`] to the constraint
/// values at wavevector `k`.
pub(crate) fn constrained_fields(
    n: usize,
    cutoff: usize,
    symbol: impl Fn(&[f64]) -> DMatrix<Complex64> + Sync,
) -> Result<Vec<FourierSymTensor>> {
    super::field::check_cutoff(n, cutoff)?;
    let basis = sym_basis(n);
    let modes: Vec<Mode> = modes_in_box(n, cutoff).into_iter().filter(|m| is_canonical(m)).collect();
    let per_mode: Vec<Vec<FourierSymTensor>> = modes
        .par_iter()
        .map(|m| {
            let k: Vec<f64> = m.iter().map(|&v| v as f64).collect();
            let zero = is_zero_mode(m);
            let plus = symbol(&k);
            let minus = (!zero).then(|| {
                let mk: Vec<f64> = k.iter().map(|v| -v).collect();
                symbol(&mk)
            });
            real_null_space(&plus, minus.as_ref(), 1e-10)
                .into_iter()
                .map(|(a, b)| {
                    let coeff: DMatrix<Complex64> = basis
                        .iter()
                        .enumerate()
                        .fold(DMatrix::zeros(n, n), |acc, (t, e)| acc + e * Complex64::new(a[t], b[t]));
                    let mut f = FourierSymTensor::new(n, cutoff);
                    if zero {
                        f.set(m.clone(), coeff).expect("mode in box");
                    } else {
                        // 2 Re(v e^{ikx}) has mean square 2|v|².
                        let v = coeff * c(std::f64::consts::FRAC_1_SQRT_2);
                        f.set(negate(m), v.map(|z| z.conj())).expect("mode in box");
                        f.set(m.clone(), v).expect("mode in box");
                    }
                    f
                })
                .collect()
        })
        .collect();
    Ok(per_mode.into_iter().flatten().collect())
}

/// Pullback under the self-cover of the torus with the given fold counts.
pub fn cover_pullback(h: &FourierSymTensor, folds: &[usize]) -> Result<FourierSymTensor> {
    let n = h.n();
    if folds.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: folds.len() });
    }
    if folds.contains(&0) {
        return Err(Error::Precondition("fold counts must be positive".into()));
    }
    let scales: Vec<f64> = h.scales().iter().zip(folds).map(|(l, &a)| l * a as f64).collect();
    let cutoff = h.cutoff() * folds.iter().copied().max().unwrap_or(1);
    let mut out = FourierSymTensor::with_scales(n, cutoff, scales)?;
    for (m, coeff) in h.iter() {
        let mm: Mode = m.iter().zip(folds).map(|(&v, &a)| v * a as i32).collect();
        out.set(mm, coeff.clone())?;
    }
    Ok(out)
}

/// `⟨𝓛h, h⟩` split into its Parseval sum and the cell measure `Π L_i`;
/// the integral is `sum · measure · (2π)^n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticForm {
    pub mode_sum: f64,
    pub cell_measure: f64,
}

impl QuadraticForm {
    pub fn of(h: &FourierSymTensor) -> Self {
        let l = lichnerowicz_flat(h);
        let mode_sum = l.iter().filter_map(|(m, a)| h.get(m).map(|b| super::field::Coefficient::dot_re(a, b))).sum();
        Self { mode_sum, cell_measure: h.cell_measure() }
    }

    pub fn value(&self, n: usize) -> f64 {
        self.mode_sum * self.cell_measure * (2.0 * std::f64::consts::PI).powi(n as i32)
    }

    /// `self / other`, with the Parseval sums and measures divided separately.
    pub fn ratio(&self, other: &Self) -> f64 {
        (self.mode_sum / other.mode_sum) * (self.cell_measure / other.cell_measure)
    }
}

/// Grid check of `∇_a Φ(h) = Φ(∇_a h)`: `Φ` applied pointwise to samples,
/// derivatives taken spectrally on both sides.
pub fn phi_commutes_with_nabla_on_grid(
    h: &FourierSymTensor,
    sigma0: &Spinor,
    rep: &GammaRep,
    grid: &Grid,
) -> Result<f64> {
    let n = rep.n();
    if h.n() != n || grid.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: h.n() });
    }
    let d = rep.spin_dim();
    let hs = grid.sample_sym(h);
    let images: Vec<DVector<Complex64>> = rep.gammas().iter().map(|g| g * &sigma0.0).collect();
    // Φ(h) as 2·n·d real arrays (re, im per spinor entry per coframe index).
    let phi_of = |comps: &[Vec<f64>]| -> Vec<Vec<f64>> {
        let len = comps[0].len();
        let mut out = vec![vec![0.0; len]; 2 * n * d];
        for j in 0..n {
            for s in 0..d {
                for i in 0..n {
                    let z = images[i][s];
                    let hv = &comps[i * n + j];
                    let base = 2 * (j * d + s);
                    for x in 0..len {
                        out[base][x] += z.re * hv[x];
                        out[base + 1][x] += z.im * hv[x];
                    }
                }
            }
        }
        out
    };
    let phi = phi_of(&hs);
    let mut worst = 0.0f64;
    for a in 0..n {
        let lhs: Vec<Vec<f64>> = phi.iter().map(|c| grid.deriv(c, a)).collect();
        let dh: Vec<Vec<f64>> = hs.iter().map(|c| grid.deriv(c, a)).collect();
        let rhs = phi_of(&dh);
        for (l, r) in lhs.iter().zip(&rhs) {
            for (x, y) in l.iter().zip(r) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::build_gamma_rep;
    use crate::rng::seeded;

    fn traceless_transverse(n: usize, k: &[f64]) -> DMatrix<f64> {
        // A = v wᵀ + w vᵀ with v, w ⟂ k and v ⟂ w gives tr A = 0, A k = 0.
        let mut v = DMatrix::zeros(n, 1);
        let mut w = DMatrix::zeros(n, 1);
        let free: Vec<usize> = (0..n).filter(|&i| k[i] == 0.0).collect();
        v[(free[0], 0)] = 1.0;
        w[(free[1], 0)] = 1.0;
        &v * w.transpose() + &w * v.transpose()
    }

    #[test]
    fn lichnerowicz_symbol_on_cos_mode() {
        let a = traceless_transverse(4, &[1.0, 2.0, 0.0, 0.0]);
        let h = FourierSymTensor::cos_mode(vec![1, 2, 0, 0], &a).unwrap();
        let l = lichnerowicz_flat(&h);
        assert!(l.max_coeff_diff(&h.scale(5.0)) < 1e-15);
        assert!(lichnerowicz_flat(&FourierSymTensor::constant(&a)).max_coeff() == 0.0);
    }

    #[test]
    fn dirac_squares_to_rough_laplacian_and_matches_form() {
        for n in [4, 7] {
            let rep = build_gamma_rep(n).unwrap();
            let s0 = rep.default_spinor();
            let mut rng = seeded(n as u64);
            let h = FourierSymTensor::random(n, 2, 6, 1.0, &mut rng);
            let phi = phi_field(&h, &s0, &rep).unwrap();
            let dphi = twisted_dirac(&phi, &rep);
            let ddphi = twisted_dirac(&dphi, &rep);
            let rhs = phi_field(&rough_laplacian(&h), &s0, &rep).unwrap();
            assert!(ddphi.max_coeff_diff(&rhs) < 1e-12);
            let form = lichnerowicz_form(&h);
            assert!((form - dphi.l2_norm_sqr()).abs() < 1e-10 * form);
            // 𝒟 is symmetric
            let g = FourierSymTensor::random(n, 2, 6, 1.0, &mut rng);
            let psi = phi_field(&g, &s0, &rep).unwrap();
            let lhs = dphi.l2_inner(&psi);
            let rhs = phi.l2_inner(&twisted_dirac(&psi, &rep));
            assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn tt_projection_properties() {
        let mut rng = seeded(9);
        let h = FourierSymTensor::random(3, 2, 8, 1.0, &mut rng);
        let dec = tt_project(&h);
        let recon = dec.h_bar.plus(&dec.h1).plus(&dec.h2);
        assert!(recon.max_coeff_diff(&h) < 1e-12);
        assert!(dec.h_bar.flat_trace().max_coeff() < 1e-12);
        assert!(divergence(&dec.h_bar).max_coeff() < 1e-12);
        assert!(dec.h_bar.l2_inner(&dec.h1).abs() < 1e-10);
        assert!(dec.h_bar.l2_inner(&dec.h2).abs() < 1e-10);
        assert!(dec.h_bar.reality_defect() < 1e-14);
    }

    #[test]
    fn tt_projection_special_inputs() {
        let u = FourierScalarField::trig(3, vec![1, 1, 0], 0.4, 0.2).unwrap();
        let dec = tt_project(&FourierSymTensor::conformal(&u));
        assert!(dec.h_bar.max_coeff() < 1e-15 && dec.h1.max_coeff() < 1e-15);
        let mut x = FourierField::<DMatrix<Complex64>>::new(3, 1);
        x.add_real_mode(vec![0, 1, 1], DMatrix::from_column_slice(3, 1, &[c(0.3), c(-0.2), c(0.5)])).unwrap();
        let h1 = lie_derivative(&x);
        let dec = tt_project(&h1);
        assert!(dec.h_bar.max_coeff() < 1e-15);
        assert!(dec.h1.max_coeff_diff(&h1) < 1e-15);
        let a = traceless_transverse(3, &[1.0, 0.0, 0.0]);
        let tt = FourierSymTensor::cos_mode(vec![1, 0, 0], &a).unwrap();
        assert!(tt_project(&tt).h_bar.max_coeff_diff(&tt) < 1e-15);
    }

    #[test]
    fn kernel_dimensions() {
        for (n, expected) in [(2, 2), (3, 5), (4, 9)] {
            let rep = build_gamma_rep(n).unwrap();
            let kb = kernel_basis(n, 1, &rep, &rep.default_spinor()).unwrap();
            assert_eq!(kb.dimension(), expected, "n = {n}");
            for t in &kb.tensors {
                assert!((t.mean_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cover_pullback_identity_and_ratio() {
        let mut rng = seeded(4);
        let h = FourierSymTensor::random(2, 2, 5, 1.0, &mut rng);
        assert_eq!(cover_pullback(&h, &[1, 1]).unwrap(), h);
        let up = cover_pullback(&h, &[2, 3]).unwrap();
        let lhs = lichnerowicz_flat(&up);
        let rhs = cover_pullback(&lichnerowicz_flat(&h), &[2, 3]).unwrap();
        assert_eq!(lhs.max_coeff_diff(&rhs), 0.0);
        assert_eq!(QuadraticForm::of(&up).ratio(&QuadraticForm::of(&h)), 6.0);
    }

    #[test]
    fn nabla_commutes_on_grid() {
        let rep = build_gamma_rep(4).unwrap();
        let mut rng = seeded(13);
        let h = FourierSymTensor::random(4, 1, 3, 1.0, &mut rng);
        let grid = Grid::new(4, 8).unwrap();
        let r = phi_commutes_with_nabla_on_grid(&h, &rep.default_spinor(), &rep, &grid).unwrap();
        assert!(r < 1e-10, "{r}");
    }
}
