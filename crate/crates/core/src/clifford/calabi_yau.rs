//! Clifford action on `⊕_k Λ^{0,k}(C^m)`.
//!
//! Real coordinates are ordered `(x_1, y_1, …, x_m, y_m)` with
//! `z_a = x_a + i y_a`. Basis `(0,k)`-forms are indexed by bitmasks over
//! `{0, …, m-1}`. The exact generators use the orthonormal basis
//! `ε_a = dz̄_a / √2`, in which `x_a· = ε_a∧ − ε_a⌟` and
//! `y_a· = i(ε_a∧ + ε_a⌟)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use super::exact::{GaussMatrix, I, ONE, ZERO};
use super::gamma::{build_gamma_rep, GammaRep};
use crate::error::{Error, Result};
use crate::util::cmax;

pub const MAX_M: usize = 4;

#[derive(Clone, Debug)]
pub struct CyModel {
    m: usize,
    wedge: Vec<GaussMatrix>,
    contract: Vec<GaussMatrix>,
    clifford: Vec<GaussMatrix>,
}

/// Outcome of building the model and comparing it with the tensor-product
/// gamma representation of the same dimension.
#[derive(Clone, Debug)]
pub struct CyModelReport {
    pub relations_exact: bool,
    pub skew_adjoint_exact: bool,
    /// `i^m c_1 ⋯ c_{2m}` equals `+1` on even degrees and `-1` on odd ones.
    pub chirality_matches_degree: bool,
    pub vacuum_annihilated: bool,
    pub intertwiner_residual: f64,
    pub intertwiner_unitarity: f64,
}

fn wedge_sign(mask: usize, a: usize) -> i64 {
    if (mask & ((1 << a) - 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl CyModel {
    pub fn new(m: usize) -> Result<Self> {
        if !(1..=MAX_M).contains(&m) {
            return Err(Error::DimensionOutOfRange { n: m, min: 1, max: MAX_M });
        }
        let dim = 1 << m;
        let wedge: Vec<GaussMatrix> = (0..m)
            .map(|a| {
                let mut w = GaussMatrix::zeros(dim);
                for mask in 0..dim {
                    if mask & (1 << a) == 0 {
                        w.set(mask | (1 << a), mask, ONE * wedge_sign(mask, a));
                    }
                }
                w
            })
            .collect();
        let contract: Vec<GaussMatrix> = wedge.iter().map(GaussMatrix::transpose).collect();
        let mut clifford = Vec::with_capacity(2 * m);
        for a in 0..m {
            clifford.push(wedge[a].add(&contract[a].scale(-ONE)));
            clifford.push(wedge[a].add(&contract[a]).scale(I));
        }
        Ok(Self { m, wedge, contract, clifford })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        1 << self.m
    }

    pub fn clifford(&self) -> &[GaussMatrix] {
        &self.clifford
    }

    pub fn wedge(&self, a: usize) -> &GaussMatrix {
        &self.wedge[a]
    }

    pub fn contract(&self, a: usize) -> &GaussMatrix {
        &self.contract[a]
    }

    pub fn degree(&self, index: usize) -> u32 {
        index.count_ones()
    }

    /// Applies `X·α = √2(π^{0,1}(X*)∧α − π^{0,1}(X)⌟α)` with `α` given in the
    /// unnormalized basis `dz̄^I`. Here `π^{0,1}(X*) = Σ (x_a + i y_a)/2 dz̄_a`
    /// and `π^{0,1}(X) = Σ (x_a − i y_a) ∂/∂z̄_a`.
    pub fn apply_formula(&self, x: &[f64], alpha: &DVector<Complex64>) -> DVector<Complex64> {
        assert_eq!(x.len(), 2 * self.m);
        let mut out = DVector::zeros(self.dim());
        for a in 0..self.m {
            let form = Complex64::new(x[2 * a], x[2 * a + 1]) * 0.5;
            let vector = Complex64::new(x[2 * a], -x[2 * a + 1]);
            let w = self.wedge[a].to_complex();
            let c = self.contract[a].to_complex();
            out += (&w * alpha) * form - (&c * alpha) * vector;
        }
        out * Complex64::new(std::f64::consts::SQRT_2, 0.0)
    }

    /// Change of basis from `dz̄^I` coefficients to orthonormal coefficients.
    pub fn to_orthonormal(&self, alpha: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_fn(self.dim(), |i, _| alpha[i] * 2f64.powf(self.degree(i) as f64 / 2.0))
    }

    pub fn chirality(&self) -> GaussMatrix {
        let prod = self.clifford.iter().fold(GaussMatrix::identity(self.dim()), |acc, c| acc.mul(c));
        let phase = [ONE, I, -ONE, -I][self.m % 4];
        prod.scale(phase)
    }

    pub fn relations_exact(&self) -> bool {
        let d = self.dim();
        let two = GaussMatrix::identity(d).scale(ONE * 2);
        (0..2 * self.m).all(|i| {
            (0..2 * self.m).all(|j| {
                let mut a = self.clifford[i].mul(&self.clifford[j]).add(&self.clifford[j].mul(&self.clifford[i]));
                if i == j {
                    a = a.add(&two);
                }
                a.is_zero()
            })
        })
    }

    /// Unitary `U` with `c_j U = U γ_j` for all generators, obtained by group
    /// averaging a random seed matrix over all Clifford monomials.
    pub fn intertwiner(&self, rep: &GammaRep, rng: &mut impl Rng) -> DMatrix<Complex64> {
        let d = self.dim();
        let n = 2 * self.m;
        let seed =
            DMatrix::from_fn(d, d, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let cl: Vec<DMatrix<Complex64>> = self.clifford.iter().map(GaussMatrix::to_complex).collect();
        let mut t = DMatrix::<Complex64>::zeros(d, d);
        for mask in 0..(1usize << n) {
            let mut c = DMatrix::<Complex64>::identity(d, d);
            let mut g = DMatrix::<Complex64>::identity(d, d);
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    c *= &cl[j];
                    g *= rep.gamma(j);
                }
            }
            t += c * &seed * g.adjoint();
        }
        let scale = (t.adjoint() * &t)[(0, 0)].re.sqrt();
        t.unscale(scale)
    }

    pub fn report(&self, rng: &mut impl Rng) -> Result<CyModelReport> {
        let rep = build_gamma_rep(2 * self.m)?;
        let u = self.intertwiner(&rep, rng);
        let cl: Vec<DMatrix<Complex64>> = self.clifford.iter().map(GaussMatrix::to_complex).collect();
        let intertwiner_residual =
            (0..2 * self.m).map(|j| cmax(&(&cl[j] * &u - &u * rep.gamma(j)))).fold(0.0, f64::max);
        let d = self.dim();
        let intertwiner_unitarity = cmax(&(u.adjoint() * &u - DMatrix::identity(d, d)));
        let chi = self.chirality();
        let chirality_matches_degree = (0..d).all(|i| {
            (0..d).all(|j| {
                let expected = if i != j {
                    ZERO
                } else if self.degree(i).is_multiple_of(2) {
                    ONE
                } else {
                    -ONE
                };
                chi.get(i, j) == expected
            })
        });
        let vacuum_annihilated = self.contract.iter().all(|c| (0..d).all(|i| c.get(i, 0) == ZERO));
        Ok(CyModelReport {
            relations_exact: self.relations_exact(),
            skew_adjoint_exact: self.clifford.iter().all(|c| c.adjoint() == c.scale(-ONE)),
            chirality_matches_degree,
            vacuum_annihilated,
            intertwiner_residual,
            intertwiner_unitarity,
        })
    }
}

/// Builds the model for `C^m` and its consistency report.
pub fn cy_clifford_model(m: usize, rng: &mut impl Rng) -> Result<(CyModel, CyModelReport)> {
    let model = CyModel::new(m)?;
    let report = model.report(rng)?;
    Ok((model, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn m1_formula_on_constant_form() {
        let model = CyModel::new(1).unwrap();
        let one = DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let x = [1.0, 0.0];
        let xa = model.apply_formula(&x, &one);
        // √2 · π^{0,1}(e₁*) = √2 · dz̄/2
        assert!((xa[1] - c(std::f64::consts::SQRT_2 / 2.0, 0.0)).norm() < 1e-15);
        assert!(xa[0].norm() < 1e-15);
        let xxa = model.apply_formula(&x, &xa);
        assert!(cmax(&(xxa + one)) < 1e-15);
    }

    #[test]
    fn formula_matches_exact_generators_after_basis_change() {
        let model = CyModel::new(2).unwrap();
        let mut rng = seeded(3);
        let alpha = DVector::from_fn(4, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        for j in 0..4 {
            let mut x = [0.0; 4];
            x[j] = 1.0;
            let lhs = model.to_orthonormal(&model.apply_formula(&x, &alpha));
            let rhs = model.clifford()[j].to_complex() * model.to_orthonormal(&alpha);
            assert!(cmax(&(lhs - rhs)) < 1e-14, "generator {j}");
        }
    }

    #[test]
    fn reports_pass_for_all_supported_m() {
        let mut rng = seeded(5);
        for m in 1..=MAX_M {
            let (_, r) = cy_clifford_model(m, &mut rng).unwrap();
            assert!(r.relations_exact && r.skew_adjoint_exact, "m = {m}");
            assert!(r.chirality_matches_degree, "m = {m}");
            assert!(r.vacuum_annihilated);
            assert!(r.intertwiner_residual < 1e-12, "m = {m}: {}", r.intertwiner_residual);
            assert!(r.intertwiner_unitarity < 1e-12);
        }
    }

    #[test]
    fn out_of_range() {
        assert!(CyModel::new(0).is_err());
        assert!(CyModel::new(5).is_err());
    }
}
