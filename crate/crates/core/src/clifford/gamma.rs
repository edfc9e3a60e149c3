use nalgebra::{DMatrix, DVector};
use num_complex::{Complex, Complex64};
use serde_json::Value;

use super::exact::{format_gauss, pauli, Gauss, GaussMatrix, I, ONE};
use crate::error::{Error, Result};
use crate::util::cmax;

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 12;

/// A skew-adjoint realization of the real Clifford algebra `Cl(n)` with
/// `e_i e_j + e_j e_i = -2 δ_ij`, acting on `C^{2^{⌊n/2⌋}}`.
#[derive(Clone, Debug)]
pub struct GammaRep {
    n: usize,
    spin_dim: usize,
    exact: Vec<GaussMatrix>,
    float: Vec<DMatrix<Complex64>>,
}

impl GammaRep {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spin_dim(&self) -> usize {
        self.spin_dim
    }

    pub fn exact(&self) -> &[GaussMatrix] {
        &self.exact
    }

    pub fn gamma(&self, i: usize) -> &DMatrix<Complex64> {
        &self.float[i]
    }

    pub fn gammas(&self) -> &[DMatrix<Complex64>] {
        &self.float
    }

    /// The first standard basis spinor, the default choice of `σ₀`.
    pub fn default_spinor(&self) -> Spinor {
        let mut v = DVector::zeros(self.spin_dim);
        v[0] = Complex64::new(1.0, 0.0);
        Spinor(v)
    }

    /// All `n²` anticommutators `γ_i γ_j + γ_j γ_i + 2δ_ij`; every entry is
    /// zero for a valid representation.
    pub fn relation_table(&self) -> Vec<GaussMatrix> {
        let id2 = GaussMatrix::identity(self.spin_dim).scale(Complex::new(2, 0));
        let mut out = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut a = self.exact[i].mul(&self.exact[j]).add(&self.exact[j].mul(&self.exact[i]));
                if i == j {
                    a = a.add(&id2);
                }
                out.push(a);
            }
        }
        out
    }

    pub fn relations_exact(&self) -> bool {
        self.relation_table().iter().all(GaussMatrix::is_zero)
    }

    pub fn skew_adjoint_exact(&self) -> bool {
        self.exact.iter().all(|g| g.adjoint() == g.scale(-ONE))
    }

    /// Gamma tables as nested JSON arrays of `"a+bi"` strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.exact
                .iter()
                .map(|g| {
                    Value::Array(
                        (0..g.dim())
                            .map(|i| {
                                Value::Array((0..g.dim()).map(|j| Value::String(format_gauss(g.get(i, j)))).collect())
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// Builds the iterated Pauli tensor-product representation. For odd `n` the
/// last generator is the scaled product of the even-dimensional ones.
pub fn build_gamma_rep(n: usize) -> Result<GammaRep> {
    if !(MIN_DIM..=MAX_DIM).contains(&n) {
        return Err(Error::DimensionOutOfRange { n, min: MIN_DIM, max: MAX_DIM });
    }
    let m = n / 2;
    let [s1, s2, s3] = pauli();
    let id = GaussMatrix::identity(2);
    let tensor = |factors: Vec<&GaussMatrix>| -> GaussMatrix {
        let mut it = factors.into_iter();
        let first = it.next().expect("at least one factor").clone();
        it.fold(first, |acc, f| acc.kron(f))
    };
    let mut exact = Vec::with_capacity(n);
    for a in 0..m {
        for s in [&s1, &s2] {
            let mut factors = Vec::with_capacity(m);
            factors.extend(std::iter::repeat_n(&s3, a));
            factors.push(s);
            factors.extend(std::iter::repeat_n(&id, m - a - 1));
            // Hermitian involution times i: skew-adjoint, squares to -1.
            exact.push(tensor(factors).scale(I));
        }
    }
    if n % 2 == 1 {
        let spin_dim = 1usize << m;
        let prod = exact.iter().fold(GaussMatrix::identity(spin_dim), |acc, g| acc.mul(g));
        let minus_id = GaussMatrix::identity(spin_dim).scale(-ONE);
        let chosen = [ONE, I, -ONE, -I]
            .into_iter()
            .map(|c| prod.scale(c))
            .find(|g| g.mul(g) == minus_id && g.adjoint() == g.scale(-ONE))
            .ok_or_else(|| Error::Precondition("no unit scaling of the chirality product squares to -1".into()))?;
        exact.push(chosen);
    }
    let float = exact.iter().map(GaussMatrix::to_complex).collect();
    Ok(GammaRep { n, spin_dim: 1 << m, exact, float })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spinor(pub DVector<Complex64>);

impl Spinor {
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn normalized(&self) -> Spinor {
        Spinor(self.0.unscale(self.norm()))
    }
}

/// A pointwise element of `S ⊗ T*M`: one spinor per coframe index.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedSpinor {
    pub components: Vec<DVector<Complex64>>,
}

impl TwistedSpinor {
    pub fn zeros(n: usize, spin_dim: usize) -> Self {
        Self { components: vec![DVector::zeros(spin_dim); n] }
    }

    /// Real part of the Hermitian product, summed over coframe indices.
    pub fn inner(&self, other: &Self) -> f64 {
        self.components.iter().zip(&other.components).map(|(a, b)| a.dotc(b).re).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.iter().all(|z| *z == Complex64::new(0.0, 0.0)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { components: self.components.iter().zip(&other.components).map(|(a, b)| a - b).collect() }
    }
}

/// A pointwise real symmetric 2-tensor in an orthonormal frame.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor(DMatrix<f64>);

impl SymTensor {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
        }
        let scale = m.amax().max(1.0);
        if (&m - m.transpose()).amax() > 1e-12 * scale {
            return Err(Error::Precondition("tensor is not symmetric".into()));
        }
        Ok(Self(m))
    }

    /// Symmetrizes an arbitrary square matrix.
    pub fn symmetrize(m: &DMatrix<f64>) -> Self {
        Self((m + m.transpose()) * 0.5)
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn inner(&self, other: &Self) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (&self.0 - self.0.transpose()).amax() <= tol
    }

    /// `Qᵀ h Q`, the tensor expressed in the frame rotated by `Q`.
    pub fn rotated(&self, q: &DMatrix<f64>) -> Self {
        Self(q.transpose() * &self.0 * q)
    }
}

/// `Φ(h) = Σ_ij h_ij (e_i · σ₀) ⊗ e^j`.
pub fn phi_map(h: &SymTensor, sigma0: &Spinor, rep: &GammaRep) -> Result<TwistedSpinor> {
    let n = rep.n();
    if h.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: h.n() });
    }
    if sigma0.dim() != rep.spin_dim() {
        return Err(Error::DimensionMismatch { expected: rep.spin_dim(), got: sigma0.dim() });
    }
    if (sigma0.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!("σ₀ must have unit norm, got {}", sigma0.norm())));
    }
    let images: Vec<DVector<Complex64>> = rep.gammas().iter().map(|g| g * &sigma0.0).collect();
    let components = (0..n)
        .map(|j| {
            let mut acc = DVector::zeros(rep.spin_dim());
            for (i, img) in images.iter().enumerate() {
                let c = h.get(i, j);
                if c != 0.0 {
                    acc.axpy(Complex64::new(c, 0.0), img, Complex64::new(1.0, 0.0));
                }
            }
            acc
        })
        .collect();
    Ok(TwistedSpinor { components })
}

/// Integer-exact `Φ` with `σ₀` the first basis spinor; returns one
/// Gaussian-integer spinor per coframe index.
pub fn phi_map_exact(h: &[Vec<i64>], rep: &GammaRep) -> Vec<Vec<Gauss>> {
    let n = rep.n();
    let mut sigma0 = vec![Complex::new(0, 0); rep.spin_dim()];
    sigma0[0] = ONE;
    let images: Vec<Vec<Gauss>> = rep.exact().iter().map(|g| g.mul_vec(&sigma0)).collect();
    (0..n)
        .map(|j| {
            let mut acc = vec![Complex::new(0, 0); rep.spin_dim()];
            for (i, img) in images.iter().enumerate() {
                for (a, v) in acc.iter_mut().zip(img) {
                    *a += v * h[i][j];
                }
            }
            acc
        })
        .collect()
}

/// Real part of the exact twisted-spinor inner product.
pub fn exact_inner(a: &[Vec<Gauss>], b: &[Vec<Gauss>]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| (u.conj() * v).re).sum::<i64>()).sum()
}

/// Spin lift `S = cos(θ/2) + sin(θ/2) γ_a γ_b` together with the rotation `Q`
/// it induces through `S γ_i S⁻¹ = Σ_j Q_ji γ_j`.
pub fn plane_rotation(rep: &GammaRep, a: usize, b: usize, theta: f64) -> (DMatrix<Complex64>, DMatrix<f64>) {
    let d = rep.spin_dim();
    let id = DMatrix::<Complex64>::identity(d, d);
    let s = id * Complex64::new((theta / 2.0).cos(), 0.0)
        + (rep.gamma(a) * rep.gamma(b)) * Complex64::new((theta / 2.0).sin(), 0.0);
    let q = induced_rotation(rep, &s);
    (s, q)
}

/// Product of plane rotations `(a, b, θ)`, applied left to right.
pub fn composite_rotation(rep: &GammaRep, planes: &[(usize, usize, f64)]) -> (DMatrix<Complex64>, DMatrix<f64>) {
    let d = rep.spin_dim();
    let s = planes
        .iter()
        .fold(DMatrix::<Complex64>::identity(d, d), |acc, &(a, b, t)| acc * plane_rotation(rep, a, b, t).0);
    let q = induced_rotation(rep, &s);
    (s, q)
}

/// Recovers `Q` from a spin transformation via `Q_ji = -tr(γ_j S γ_i S⁻¹)/d`.
pub fn induced_rotation(rep: &GammaRep, s: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = rep.n();
    let d = rep.spin_dim() as f64;
    let s_inv = s.adjoint();
    DMatrix::from_fn(n, n, |j, i| {
        let conj = s * rep.gamma(i) * &s_inv;
        -(rep.gamma(j) * conj).trace().re / d
    })
}

/// `max |Φ_{Sσ₀}(Q h Qᵀ) - (S ⊗ Q) Φ_{σ₀}(h)|`.
pub fn spin_equivariance_residual(
    rep: &GammaRep,
    h: &SymTensor,
    sigma0: &Spinor,
    s: &DMatrix<Complex64>,
    q: &DMatrix<f64>,
) -> Result<f64> {
    let n = rep.n();
    let lhs = phi_map(&SymTensor(q * h.matrix() * q.transpose()), &Spinor(s * &sigma0.0), rep)?;
    let base = phi_map(h, sigma0, rep)?;
    let mut worst: f64 = 0.0;
    for jp in 0..n {
        let mut acc = DVector::<Complex64>::zeros(rep.spin_dim());
        for j in 0..n {
            acc += (s * &base.components[j]) * Complex64::new(q[(jp, j)], 0.0);
        }
        worst = worst.max(cmax(&(&lhs.components[jp] - acc)));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;

    fn random_sym(n: usize, rng: &mut impl Rng) -> SymTensor {
        SymTensor::symmetrize(&DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn relations_exact_in_supported_range() {
        for n in MIN_DIM..=MAX_DIM {
            let rep = build_gamma_rep(n).unwrap();
            assert_eq!(rep.spin_dim(), 1 << (n / 2));
            assert!(rep.relations_exact(), "n = {n}");
            assert!(rep.skew_adjoint_exact(), "n = {n}");
        }
    }

    #[test]
    fn n2_generators_square_to_minus_identity() {
        let rep = build_gamma_rep(2).unwrap();
        let minus = GaussMatrix::identity(2).scale(-ONE);
        for g in rep.exact() {
            assert_eq!(g.mul(g), minus);
        }
        let [a, b] = [&rep.exact()[0], &rep.exact()[1]];
        assert!(a.mul(b).add(&b.mul(a)).is_zero());
    }

    #[test]
    fn n7_table_has_49_zero_residuals() {
        let rep = build_gamma_rep(7).unwrap();
        assert_eq!(rep.spin_dim(), 8);
        let table = rep.relation_table();
        assert_eq!(table.len(), 49);
        assert!(table.iter().all(GaussMatrix::is_zero));
    }

    #[test]
    fn out_of_range_dimensions_rejected() {
        assert!(matches!(build_gamma_rep(1), Err(Error::DimensionOutOfRange { .. })));
        assert!(matches!(build_gamma_rep(13), Err(Error::DimensionOutOfRange { .. })));
    }

    #[test]
    fn phi_of_zero_and_identity() {
        let rep = build_gamma_rep(4).unwrap();
        let s0 = rep.default_spinor();
        assert!(phi_map(&SymTensor::zeros(4), &s0, &rep).unwrap().is_zero());
        let p = phi_map(&SymTensor::identity(4), &s0, &rep).unwrap();
        assert!((p.norm_sqr() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn phi_isometry_n7_random() {
        let rep = build_gamma_rep(7).unwrap();
        let s0 = rep.default_spinor();
        let mut rng = seeded(11);
        let h = random_sym(7, &mut rng);
        let k = random_sym(7, &mut rng);
        let lhs = phi_map(&h, &s0, &rep).unwrap().inner(&phi_map(&k, &s0, &rep).unwrap());
        assert!((lhs - h.inner(&k)).abs() < 1e-13);
    }

    #[test]
    fn phi_isometry_exact_integers() {
        let rep = build_gamma_rep(5).unwrap();
        let h: Vec<Vec<i64>> = (0..5).map(|i| (0..5).map(|j| ((i + j) as i64 % 4) - 1).collect()).collect();
        let k: Vec<Vec<i64>> = (0..5).map(|i| (0..5).map(|j| (i as i64 * j as i64) % 3 - 1).collect()).collect();
        let expected: i64 = (0..5).flat_map(|i| (0..5).map(move |j| (i, j))).map(|(i, j)| h[i][j] * k[i][j]).sum();
        assert_eq!(exact_inner(&phi_map_exact(&h, &rep), &phi_map_exact(&k, &rep)), expected);
    }

    #[test]
    fn phi_rejects_bad_inputs() {
        let rep = build_gamma_rep(4).unwrap();
        let s0 = rep.default_spinor();
        assert!(phi_map(&SymTensor::identity(3), &s0, &rep).is_err());
        let bad = Spinor(s0.0.scale(2.0));
        assert!(phi_map(&SymTensor::identity(4), &bad, &rep).is_err());
        assert!(SymTensor::new(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn plane_rotation_is_orthogonal() {
        let rep = build_gamma_rep(4).unwrap();
        let (_, q) = plane_rotation(&rep, 0, 2, 0.7);
        assert!((q.transpose() * &q - DMatrix::identity(4, 4)).amax() < 1e-14);
        assert!((q[(1, 1)] - 1.0).abs() < 1e-14);
        assert!((q[(0, 0)] - 0.7f64.cos()).abs() < 1e-14);
    }

    #[test]
    fn gamma_json_shape() {
        let rep = build_gamma_rep(3).unwrap();
        let v = rep.to_json();
        assert_eq!(v.as_array().unwrap().len(), 3);
        assert_eq!(v[0].as_array().unwrap().len(), 2);
        assert!(v[0][0][0].as_str().unwrap().ends_with('i'));
    }
}
