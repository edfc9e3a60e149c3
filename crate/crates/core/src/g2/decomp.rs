//! Type decomposition `Λ³ = Λ³₁ ⊕ Λ³₇ ⊕ Λ³₂₇` and the map `Ψ`, in exact
//! rational arithmetic.

use nalgebra::DMatrix;
use num_rational::Rational64;
use num_traits::{One, Zero};

use super::forms::{subsets, Form, DIM};
use super::structure::{basis, G2Structure};

pub type RatMatrix = DMatrix<Rational64>;

fn r(v: i64) -> Rational64 {
    Rational64::from_integer(v)
}

/// Rank by fraction-exact Gaussian elimination.
pub fn rank(m: &RatMatrix) -> usize {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(rank, p);
        let pivot = a[(rank, c)];
        for i in 0..rows {
            if i != rank && !a[(i, c)].is_zero() {
                let f = a[(i, c)] / pivot;
                for j in c..cols {
                    let v = a[(rank, j)];
                    a[(i, j)] -= f * v;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Matrix of a linear map on 3-forms in the [`subsets`] basis.
fn matrix_of(f: impl Fn(&Form<Rational64>) -> Form<Rational64>) -> RatMatrix {
    let basis3 = subsets(3);
    let mut m = RatMatrix::zeros(35, 35);
    for (col, &mask) in basis3.iter().enumerate() {
        let mut e = Form::zero();
        e.set(mask, r(1));
        let img = f(&e).to_vec(3);
        for (row, v) in img.into_iter().enumerate() {
            m[(row, col)] = v;
        }
    }
    m
}

#[derive(Clone, Debug)]
pub struct Projectors {
    pub p1: RatMatrix,
    pub p7: RatMatrix,
    pub p27: RatMatrix,
}

impl Projectors {
    pub fn new(g: &G2Structure) -> Self {
        let phi: Form<Rational64> = g.phi_as();
        let norm = phi.dot(&phi);
        let p1 = matrix_of(|a| phi.scale(a.dot(&phi) / norm));
        // Columns *(φ ∧ e^i) are orthogonal with squared norm 4.
        let b = RatMatrix::from_fn(35, DIM, |row, i| {
            phi.wedge(&Form::one_form(&basis::<Rational64>(i))).star().to_vec(3)[row]
        });
        let p7 = (&b * b.transpose()) * Rational64::new(1, 4);
        let p27 = RatMatrix::identity(35, 35) - &p1 - &p7;
        Self { p1, p7, p27 }
    }

    pub fn ranks(&self) -> (usize, usize, usize) {
        (rank(&self.p1), rank(&self.p7), rank(&self.p27))
    }

    /// Counts failures of idempotence, mutual annihilation and resolution
    /// of the identity.
    pub fn algebra_violations(&self) -> usize {
        let ps = [&self.p1, &self.p7, &self.p27];
        let mut bad = 0;
        for (i, a) in ps.iter().enumerate() {
            for (j, b) in ps.iter().enumerate() {
                let prod = *a * *b;
                let ok = if i == j { prod == **a } else { prod.iter().all(|v| v.is_zero()) };
                bad += usize::from(!ok);
            }
        }
        let sum = self.p1.clone() + &self.p7 + &self.p27;
        bad += usize::from(sum != RatMatrix::identity(35, 35));
        bad
    }

    pub fn project(&self, alpha: &Form<Rational64>) -> (Form<Rational64>, Form<Rational64>, Form<Rational64>) {
        let v = nalgebra::DVector::from_vec(alpha.to_vec(3));
        let f = |m: &RatMatrix| Form::from_vec(3, (m * &v).as_slice());
        (f(&self.p1), f(&self.p7), f(&self.p27))
    }
}

/// `α ∧ φ = 0` and `α ∧ *φ = 0`.
pub fn in_lambda27(g: &G2Structure, alpha: &Form<Rational64>) -> bool {
    alpha.wedge(&g.phi_as()).is_zero() && alpha.wedge(&g.star_phi_as()).is_zero()
}

/// Whether `α = *(φ ∧ β)` for some 1-form `β`, tested by `P₇ α = α`
/// being reproduced from `β = ¼ Bᵀα`.
pub fn in_lambda7(g: &G2Structure, alpha: &Form<Rational64>) -> bool {
    let phi: Form<Rational64> = g.phi_as();
    let beta: Vec<Rational64> = (0..DIM)
        .map(|i| phi.wedge(&Form::one_form(&basis::<Rational64>(i))).star().dot(alpha) * Rational64::new(1, 4))
        .collect();
    phi.wedge(&Form::one_form(&beta)).star() == *alpha
}

/// `Ψ(h) = Σ h_ij e^i ∧ (e_j ⌟ φ)` for a symmetric matrix given by rows.
pub fn psi<T: super::forms::Scalar>(g: &G2Structure, h: &[[T; DIM]; DIM]) -> Form<T> {
    let phi: Form<T> = g.phi_as();
    let mut out = Form::zero();
    for j in 0..DIM {
        let cj = phi.interior_basis(j);
        for i in 0..DIM {
            if h[i][j] != T::zero() {
                out = out.add(&Form::one_form(&basis::<T>(i)).wedge(&cj).scale(h[i][j]));
            }
        }
    }
    out
}

/// Basis of traceless symmetric matrices: `E_ij + E_ji` for `i < j` and
/// `E_ii − E_77`.
pub fn traceless_basis() -> Vec<[[Rational64; DIM]; DIM]> {
    let mut out = Vec::with_capacity(27);
    for i in 0..DIM {
        for j in i + 1..DIM {
            let mut h = [[r(0); DIM]; DIM];
            h[i][j] = r(1);
            h[j][i] = r(1);
            out.push(h);
        }
    }
    for i in 0..DIM - 1 {
        let mut h = [[r(0); DIM]; DIM];
        h[i][i] = r(1);
        h[DIM - 1][DIM - 1] = -Rational64::one();
        out.push(h);
    }
    out
}

/// The `35 × 27` coefficient matrix of `Ψ` on traceless tensors.
pub fn psi_matrix(g: &G2Structure) -> RatMatrix {
    let basis = traceless_basis();
    RatMatrix::from_fn(35, basis.len(), |row, col| psi(g, &basis[col]).to_vec(3)[row])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2::structure::random_rational_vector;
    use crate::rng::seeded;

    #[test]
    fn projector_ranks_and_algebra() {
        let g = G2Structure::new().unwrap();
        let p = Projectors::new(&g);
        assert_eq!(p.ranks(), (1, 7, 27));
        assert_eq!(p.algebra_violations(), 0);
    }

    #[test]
    fn projection_examples() {
        let g = G2Structure::new().unwrap();
        let p = Projectors::new(&g);
        let phi: Form<Rational64> = g.phi_as();
        let (a, b, c) = p.project(&phi);
        assert_eq!(a, phi);
        assert!(b.is_zero() && c.is_zero());
        let alpha = phi.wedge(&Form::one_form(&basis::<Rational64>(0))).star();
        let (a, b, c) = p.project(&alpha);
        assert!(a.is_zero() && c.is_zero());
        assert_eq!(b, alpha);
        assert!(in_lambda7(&g, &b));
        let mut rng = seeded(1);
        let coeffs: Vec<Rational64> = (0..5).flat_map(|_| random_rational_vector(&mut rng)).take(35).collect();
        let alpha = Form::from_vec(3, &coeffs);
        let (a, b, c) = p.project(&alpha);
        assert_eq!(a.add(&b).add(&c), alpha);
        assert!(in_lambda27(&g, &c));
        assert!(in_lambda7(&g, &b));
    }

    #[test]
    fn psi_properties() {
        let g = G2Structure::new().unwrap();
        let mut id = [[r(0); DIM]; DIM];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = r(1);
        }
        assert_eq!(psi(&g, &id), g.phi_as::<Rational64>().scale(r(3)));
        let mut h = [[r(0); DIM]; DIM];
        h[0][0] = r(1);
        h[1][1] = r(-1);
        assert!(in_lambda27(&g, &psi(&g, &h)));
        assert_eq!(rank(&psi_matrix(&g)), 27);
        assert!(traceless_basis().iter().all(|h| in_lambda27(&g, &psi(&g, h))));
    }
}
