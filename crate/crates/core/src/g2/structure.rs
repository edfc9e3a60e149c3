//! The fundamental 3-form, the cross product and the spinor model
//! `𝕊 = ℝ ⊕ ℝ⁷`.

use num_rational::Rational64;
use rand::Rng;

use super::forms::{indices, monomial_from_digits, subsets, Form, Scalar, DIM};
use crate::error::{Error, Result};

pub type Vector<T> = [T; DIM];

const PHI_TERMS: [(&str, i64); 7] =
    [("123", 1), ("145", 1), ("167", 1), ("246", 1), ("257", -1), ("347", -1), ("356", -1)];

const STAR_PHI_TERMS: [(&str, i64); 7] =
    [("4567", 1), ("2367", 1), ("2345", 1), ("1357", 1), ("1346", -1), ("1256", -1), ("1247", -1)];

fn from_terms(terms: &[(&str, i64)]) -> Form<i64> {
    terms.iter().fold(Form::zero(), |acc, &(d, c)| acc.add(&monomial_from_digits(d, c)))
}

#[derive(Clone, Debug)]
pub struct G2Structure {
    phi: Form<i64>,
    star_phi: Form<i64>,
    /// `cross[i][j][k] = φ(e_i, e_j, e_k)`.
    cross: [[[i64; DIM]; DIM]; DIM],
}

impl G2Structure {
    /// Builds `φ`, checks the computed `*φ` against the tabulated dual and
    /// tabulates `P`.
    pub fn new() -> Result<Self> {
        let phi = from_terms(&PHI_TERMS);
        let star_phi = from_terms(&STAR_PHI_TERMS);
        if phi.star() != star_phi {
            return Err(Error::Orientation(
                "the Hodge star of φ for the orientation e^{1…7} differs from the tabulated *φ".into(),
            ));
        }
        let mut cross = [[[0i64; DIM]; DIM]; DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    cross[i][j][k] = phi.interior_basis(i).interior_basis(j).get(1 << k);
                }
            }
        }
        // The table must reproduce the monomial coefficients of φ.
        for m in subsets(3) {
            let idx = indices(m);
            let value = phi.get(m);
            if cross[idx[0]][idx[1]][idx[2]] != value {
                return Err(Error::Orientation("cross-product table disagrees with φ".into()));
            }
        }
        Ok(Self { phi, star_phi, cross })
    }

    pub fn phi(&self) -> &Form<i64> {
        &self.phi
    }

    pub fn star_phi(&self) -> &Form<i64> {
        &self.star_phi
    }

    pub fn phi_as<T: Scalar>(&self) -> Form<T> {
        self.phi.map(T::from_i64)
    }

    pub fn star_phi_as<T: Scalar>(&self) -> Form<T> {
        self.star_phi.map(T::from_i64)
    }

    /// `φ(e_i, e_j, e_k)`.
    pub fn phi_ijk(&self, i: usize, j: usize, k: usize) -> i64 {
        self.cross[i][j][k]
    }

    pub fn phi_eval<T: Scalar>(&self, x: &[T], y: &[T], z: &[T]) -> T {
        let mut acc = T::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    let c = self.cross[i][j][k];
                    if c != 0 {
                        acc = acc + T::from_i64(c) * x[i] * y[j] * z[k];
                    }
                }
            }
        }
        acc
    }

    /// `P(X, Y) = Σ_k φ(X, Y, e_k) e_k`.
    pub fn cross<T: Scalar>(&self, x: &[T], y: &[T]) -> Vector<T> {
        let mut out = [T::zero(); DIM];
        for i in 0..DIM {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..DIM {
                if y[j].is_zero() {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.cross[i][j][k];
                    if c != 0 {
                        *o = *o + T::from_i64(c) * x[i] * y[j];
                    }
                }
            }
        }
        out
    }

    /// `X · (a, Y) = (−⟨X, Y⟩, aX + P(X, Y))`.
    pub fn clifford<T: Scalar>(&self, x: &[T], s: &G2Spinor<T>) -> G2Spinor<T> {
        let p = self.cross(x, &s.y);
        let mut y = [T::zero(); DIM];
        for k in 0..DIM {
            y[k] = s.a * x[k] + p[k];
        }
        G2Spinor { a: -dot(x, &s.y), y }
    }
}

pub fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
}

pub fn basis<T: Scalar>(i: usize) -> Vector<T> {
    let mut v = [T::zero(); DIM];
    v[i] = T::one();
    v
}

/// Element `(a, Y)` of `ℝ ⊕ ℝ⁷`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct G2Spinor<T> {
    pub a: T,
    pub y: Vector<T>,
}

impl<T: Scalar> G2Spinor<T> {
    /// `σ₀ = (1, 0)`.
    pub fn sigma0() -> Self {
        Self { a: T::one(), y: [T::zero(); DIM] }
    }

    pub fn inner(&self, other: &Self) -> T {
        self.a * other.a + dot(&self.y, &other.y)
    }

    pub fn scale(&self, s: T) -> Self {
        Self { a: self.a * s, y: self.y.map(|v| v * s) }
    }
}

/// Random rational vector with numerators in `[-9, 9]` and denominators in
/// `[1, 6]`.
pub fn random_rational_vector(rng: &mut impl Rng) -> Vector<Rational64> {
    std::array::from_fn(|_| Rational64::new(rng.random_range(-9..=9), rng.random_range(1..=6)))
}

/// Violation counts for the four cross-product identities, each over its
/// basis range and a list of rational samples.
#[derive(Clone, Debug, Default)]
pub struct CrossIdentityReport {
    pub antisymmetry: usize,
    pub norm_identity: usize,
    pub double_cross: usize,
    pub contraction: usize,
    /// Number of evaluated instances per identity.
    pub cases: [usize; 4],
}

impl CrossIdentityReport {
    pub fn total_violations(&self) -> usize {
        self.antisymmetry + self.norm_identity + self.double_cross + self.contraction
    }
}

fn check_pair(g: &G2Structure, x: &Vector<Rational64>, y: &Vector<Rational64>, r: &mut CrossIdentityReport) {
    // (1)
    let pxy = g.cross(x, y);
    let pyx = g.cross(y, x);
    r.cases[0] += 1;
    if pxy.iter().zip(&pyx).any(|(a, b)| *a != -*b) {
        r.antisymmetry += 1;
    }
    // (3) P(X, P(X, Y)) = −|X|²Y + ⟨X,Y⟩X
    let lhs = g.cross(x, &pxy);
    let xx = dot(x, x);
    let xy = dot(x, y);
    r.cases[2] += 1;
    if (0..DIM).any(|k| lhs[k] != -xx * y[k] + xy * x[k]) {
        r.double_cross += 1;
    }
    // (4) X ⌟ (Y ⌟ *φ) = −P(X,Y) ⌟ φ + X* ∧ Y*
    let star: Form<Rational64> = g.star_phi_as();
    let phi: Form<Rational64> = g.phi_as();
    let lhs = star.interior(y).interior(x);
    let rhs = Form::one_form(x).wedge(&Form::one_form(y)).sub(&phi.interior(&pxy));
    r.cases[3] += 1;
    if lhs != rhs {
        r.contraction += 1;
    }
}

fn check_triple(
    g: &G2Structure,
    x: &Vector<Rational64>,
    y: &Vector<Rational64>,
    z: &Vector<Rational64>,
    r: &mut CrossIdentityReport,
) {
    // (2) ⟨P(X,Y), P(X,Z)⟩ = |X|²⟨Y,Z⟩ − ⟨X,Y⟩⟨X,Z⟩
    let lhs = dot(&g.cross(x, y), &g.cross(x, z));
    let rhs = dot(x, x) * dot(y, z) - dot(x, y) * dot(x, z);
    r.cases[1] += 1;
    if lhs != rhs {
        r.norm_identity += 1;
    }
}

/// Checks the cross-product identities on all basis pairs and triples and
/// on `samples` random rational triples.
pub fn cross_identities(g: &G2Structure, samples: usize, rng: &mut impl Rng) -> CrossIdentityReport {
    let mut r = CrossIdentityReport::default();
    let e: Vec<Vector<Rational64>> = (0..DIM).map(basis).collect();
    for x in &e {
        for y in &e {
            check_pair(g, x, y, &mut r);
            for z in &e {
                check_triple(g, x, y, z, &mut r);
            }
        }
    }
    for _ in 0..samples {
        let x = random_rational_vector(rng);
        let y = random_rational_vector(rng);
        let z = random_rational_vector(rng);
        check_pair(g, &x, &y, &mut r);
        check_triple(g, &x, &y, &z, &mut r);
    }
    r
}

/// Violations of `X·X·s = −|X|² s` over basis vectors and random inputs.
pub fn clifford_relation_violations(g: &G2Structure, samples: usize, rng: &mut impl Rng) -> (usize, usize) {
    let mut violations = 0;
    let mut cases = 0;
    let mut check = |x: &Vector<Rational64>, s: &G2Spinor<Rational64>| {
        let xxs = g.clifford(x, &g.clifford(x, s));
        cases += 1;
        if xxs != s.scale(-dot(x, x)) {
            violations += 1;
        }
    };
    for i in 0..DIM {
        for j in 0..=DIM {
            let s =
                if j == DIM { G2Spinor::sigma0() } else { G2Spinor { a: Rational64::from_integer(0), y: basis(j) } };
            check(&basis(i), &s);
        }
    }
    for _ in 0..samples {
        let x = random_rational_vector(rng);
        let y = random_rational_vector(rng);
        let a = Rational64::new(rng.random_range(-9..=9), rng.random_range(1..=6));
        check(&x, &G2Spinor { a, y });
    }
    (violations, cases)
}

/// Violations of `φ(X,Y,Z) = −⟨X·Y·Z·σ₀, σ₀⟩` over all basis triples.
pub fn cubic_pairing_violations(g: &G2Structure) -> usize {
    let s0 = G2Spinor::<i64>::sigma0();
    let mut bad = 0;
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                let s = g.clifford(&basis(i), &g.clifford(&basis(j), &g.clifford(&basis(k), &s0)));
                if g.phi_ijk(i, j, k) != -s.inner(&s0) {
                    bad += 1;
                }
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn cross_table_examples() {
        let g = G2Structure::new().unwrap();
        let p: Vector<i64> = g.cross(&basis(0), &basis(1));
        assert_eq!(p, basis::<i64>(2));
        let p: Vector<i64> = g.cross(&basis(1), &basis(4));
        assert_eq!(p, basis::<i64>(6).map(|v| -v));
        let mut rng = seeded(2);
        let x = random_rational_vector(&mut rng);
        assert!(g.cross(&x, &x).iter().all(|v| *v == Rational64::from_integer(0)));
    }

    #[test]
    fn identities_hold_exactly() {
        let g = G2Structure::new().unwrap();
        let mut rng = seeded(3);
        let r = cross_identities(&g, 100, &mut rng);
        assert_eq!(r.total_violations(), 0, "{r:?}");
        assert_eq!(r.cases[1], 343 + 100);
        // Worked example: P(e₁, P(e₁, e₂)) = P(e₁, e₃) = −e₂
        let v: Vector<i64> = g.cross(&basis(0), &g.cross(&basis(0), &basis(1)));
        assert_eq!(v, basis::<i64>(1).map(|x| -x));
    }

    #[test]
    fn clifford_model() {
        let g = G2Structure::new().unwrap();
        let s = g.clifford(&basis::<i64>(0), &G2Spinor::sigma0());
        assert_eq!(s, G2Spinor { a: 0, y: basis(0) });
        let mut rng = seeded(4);
        assert_eq!(clifford_relation_violations(&g, 100, &mut rng).0, 0);
        assert_eq!(cubic_pairing_violations(&g), 0);
        let s0 = G2Spinor::<i64>::sigma0();
        let s = g.clifford(&basis(0), &g.clifford(&basis(1), &g.clifford(&basis(2), &s0)));
        assert_eq!(-s.inner(&s0), 1);
    }
}
