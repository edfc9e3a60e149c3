//! Metrics on tori and their Levi-Civita data on a sampling grid.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::field::{FourierScalarField, FourierSymTensor};
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::geometry::{point_curvature, MetricJet};

/// `g = δ + p` with a band-limited perturbation `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierMetric {
    perturbation: FourierSymTensor,
}

impl FourierMetric {
    pub fn flat(n: usize) -> Self {
        Self { perturbation: FourierSymTensor::new(n, 0) }
    }

    pub fn perturbed(perturbation: FourierSymTensor) -> Result<Self> {
        if perturbation.symmetry_defect() > 0.0 {
            return Err(Error::Precondition("metric perturbation must be symmetric".into()));
        }
        if perturbation.reality_defect() > 1e-14 * perturbation.max_coeff().max(1.0) {
            return Err(Error::Precondition("metric perturbation must be a real field".into()));
        }
        Ok(Self { perturbation })
    }

    pub fn n(&self) -> usize {
        self.perturbation.n()
    }

    pub fn perturbation(&self) -> &FourierSymTensor {
        &self.perturbation
    }

    pub fn is_flat(&self) -> bool {
        self.perturbation.coeffs().iter().all(|(m, c)| m.iter().all(|&v| v == 0) || c.iter().all(|z| z.norm() == 0.0))
    }

    pub fn eval(&self, x: &[f64]) -> DMatrix<f64> {
        DMatrix::identity(self.n(), self.n()) + self.perturbation.eval(x)
    }
}

/// A metric sampled on a grid, stored as `n²` component arrays.
#[derive(Clone, Debug)]
pub struct GridMetric {
    grid: Grid,
    comps: Vec<Vec<f64>>,
}

impl GridMetric {
    pub fn flat(grid: &Grid) -> Self {
        Self::from_fn(grid, |_| DMatrix::identity(grid.n(), grid.n()))
    }

    pub fn from_fourier(grid: &Grid, g: &FourierMetric) -> Result<Self> {
        if g.n() != grid.n() {
            return Err(Error::DimensionMismatch { expected: grid.n(), got: g.n() });
        }
        Ok(Self::from_fn(grid, |x| g.eval(x)))
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> DMatrix<f64>) -> Self {
        let n = grid.n();
        let mut comps = vec![vec![0.0; grid.len()]; n * n];
        for (p, x) in grid.points().enumerate() {
            let m = f(&x);
            for i in 0..n {
                for j in 0..n {
                    comps[i * n + j][p] = 0.5 * (m[(i, j)] + m[(j, i)]);
                }
            }
        }
        Self { grid: grid.clone(), comps }
    }

    pub fn from_components(grid: &Grid, comps: Vec<Vec<f64>>) -> Result<Self> {
        let n = grid.n();
        if comps.len() != n * n || comps.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::DimensionMismatch { expected: n * n, got: comps.len() });
        }
        Ok(Self { grid: grid.clone(), comps })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.comps
    }

    pub fn at(&self, p: usize) -> DMatrix<f64> {
        let n = self.grid.n();
        DMatrix::from_fn(n, n, |i, j| self.comps[i * n + j][p])
    }

    /// `g + t h` for a sampled symmetric tensor `h`.
    pub fn plus(&self, h: &[Vec<f64>], t: f64) -> Self {
        let comps = self.comps.iter().zip(h).map(|(g, h)| g.iter().zip(h).map(|(a, b)| a + t * b).collect()).collect();
        Self { grid: self.grid.clone(), comps }
    }

    /// `c g` for a constant `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let comps = self.comps.iter().map(|g| g.iter().map(|v| c * v).collect()).collect();
        Self { grid: self.grid.clone(), comps }
    }

    /// `φ g` for a positive sampled function `φ`.
    pub fn conformal(&self, phi: &[f64]) -> Self {
        let comps = self.comps.iter().map(|g| g.iter().zip(phi).map(|(v, f)| v * f).collect()).collect();
        Self { grid: self.grid.clone(), comps }
    }
}

/// Levi-Civita data of a grid metric, computed from spectral derivatives.
#[derive(Clone, Debug)]
pub struct GridGeometry {
    pub(crate) grid: Grid,
    pub(crate) g: Vec<Vec<f64>>,
    pub(crate) g_inv: Vec<Vec<f64>>,
    pub(crate) sqrt_g: Vec<f64>,
    /// `gamma[(m * n + i) * n + j] = Γ^m_ij`.
    pub(crate) gamma: Vec<Vec<f64>>,
    /// `riemann[((i * n + j) * n + k) * n + l] = R_ijkl`.
    pub(crate) riemann: Vec<Vec<f64>>,
    pub(crate) ricci: Vec<Vec<f64>>,
    pub(crate) scalar: Vec<f64>,
}

/// Computes Christoffel symbols, Riemann and Ricci tensors and the scalar
/// curvature at every grid point.
pub fn metric_curvature(metric: &GridMetric) -> Result<GridGeometry> {
    let grid = metric.grid().clone();
    let n = grid.n();
    let len = grid.len();
    let g = metric.components();
    // Derivatives of the independent components i ≤ j.
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let dg: Vec<Vec<Vec<f64>>> =
        pairs.par_iter().map(|&(i, j)| (0..n).map(|a| grid.deriv(&g[i * n + j], a)).collect()).collect();
    let ddg: Vec<Vec<Vec<f64>>> = dg
        .par_iter()
        .map(|d| {
            let mut out = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    out.push(grid.deriv(&d[b], a));
                }
            }
            out
        })
        .collect();
    let pair_index = |i: usize, j: usize| {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        pairs.iter().position(|&p| p == (i, j)).expect("pair present")
    };
    let pidx: Vec<usize> = (0..n * n).map(|ij| pair_index(ij / n, ij % n)).collect();

    let points: Vec<Option<crate::geometry::PointCurvature>> = (0..len)
        .into_par_iter()
        .map(|p| {
            let gm = DMatrix::from_fn(n, n, |i, j| g[i * n + j][p]);
            let d: Vec<DMatrix<f64>> =
                (0..n).map(|a| DMatrix::from_fn(n, n, |i, j| dg[pidx[i * n + j]][a][p])).collect();
            let dd: Vec<Vec<DMatrix<f64>>> = (0..n)
                .map(|a| (0..n).map(|b| DMatrix::from_fn(n, n, |i, j| ddg[pidx[i * n + j]][a * n + b][p])).collect())
                .collect();
            point_curvature(&MetricJet { g: gm, dg: d, ddg: dd })
        })
        .collect();

    let mut g_inv = vec![vec![0.0; len]; n * n];
    let mut sqrt_g = vec![0.0; len];
    let mut gamma = vec![vec![0.0; len]; n * n * n];
    let mut riemann = vec![vec![0.0; len]; n * n * n * n];
    let mut ricci = vec![vec![0.0; len]; n * n];
    let mut scalar = vec![0.0; len];
    for (p, pc) in points.into_iter().enumerate() {
        let pc = pc.ok_or(Error::NonPositiveMetric { index: p })?;
        for (c, v) in pc.g_inv.iter().enumerate() {
            // nalgebra is column-major; the inverse is symmetric.
            g_inv[c][p] = *v;
        }
        for (c, v) in pc.christoffel.iter().enumerate() {
            gamma[c][p] = *v;
        }
        for (c, v) in pc.riemann.iter().enumerate() {
            riemann[c][p] = *v;
        }
        for i in 0..n {
            for j in 0..n {
                ricci[i * n + j][p] = pc.ricci[(i, j)];
            }
        }
        scalar[p] = pc.scalar;
        let det = DMatrix::from_fn(n, n, |i, j| g[i * n + j][p]).determinant();
        sqrt_g[p] = det.sqrt();
    }
    Ok(GridGeometry { grid, g: g.to_vec(), g_inv, sqrt_g, gamma, riemann, ricci, scalar })
}

impl GridGeometry {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn scalar(&self) -> &[f64] {
        &self.scalar
    }

    pub fn ricci(&self) -> &[Vec<f64>] {
        &self.ricci
    }

    pub fn riemann(&self) -> &[Vec<f64>] {
        &self.riemann
    }

    pub fn christoffel(&self) -> &[Vec<f64>] {
        &self.gamma
    }

    /// Metric components, `g[i * n + j]`.
    pub fn metric(&self) -> &[Vec<f64>] {
        &self.g
    }

    pub fn inverse_metric(&self) -> &[Vec<f64>] {
        &self.g_inv
    }

    pub fn sqrt_det(&self) -> &[f64] {
        &self.sqrt_g
    }

    pub fn volume(&self) -> f64 {
        self.integrate(&vec![1.0; self.grid.len()])
    }

    /// `∫ f dV_g`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        f.iter().zip(&self.sqrt_g).map(|(a, b)| a * b).sum::<f64>() * self.grid.cell_volume()
    }

    /// Largest violation of the algebraic curvature identities over the grid.
    pub fn riemann_symmetry_residual(&self) -> f64 {
        let n = self.n();
        let at = |i: usize, j: usize, k: usize, l: usize| &self.riemann[((i * n + j) * n + k) * n + l];
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let (a, b, c, d, e) =
                            (at(i, j, k, l), at(j, i, k, l), at(i, j, l, k), at(k, l, i, j), at(j, k, i, l));
                        let f = at(k, i, j, l);
                        for p in 0..self.grid.len() {
                            worst = worst
                                .max((a[p] + b[p]).abs())
                                .max((a[p] + c[p]).abs())
                                .max((a[p] - d[p]).abs())
                                .max((a[p] + e[p] + f[p]).abs());
                        }
                    }
                }
            }
        }
        worst
    }
}

/// Samples `e^{2u} δ` for a scalar field `u`.
pub fn conformally_flat(grid: &Grid, u: &FourierScalarField) -> GridMetric {
    let n = grid.n();
    GridMetric::from_fn(grid, |x| DMatrix::identity(n, n) * (2.0 * u.eval(x)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn flat_metric_is_flat() {
        let grid = Grid::new(3, 8).unwrap();
        let geo = metric_curvature(&GridMetric::flat(&grid)).unwrap();
        assert!(geo.riemann.iter().all(|c| c.iter().all(|&v| v == 0.0)));
        assert!(geo.scalar.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn conformal_two_torus_scalar() {
        let grid = Grid::new(2, 32).unwrap();
        let u = FourierScalarField::trig(2, vec![1, 0], 0.1, 0.0).unwrap();
        let geo = metric_curvature(&conformally_flat(&grid, &u)).unwrap();
        for (p, x) in grid.points().enumerate() {
            // S = −2 e^{−2u} Δu with Δu = −0.1 cos x₁
            let uu = 0.1 * x[0].cos();
            let expected = -2.0 * (-2.0 * uu).exp() * (-0.1 * x[0].cos());
            assert!((geo.scalar[p] - expected).abs() < 1e-9, "{} vs {}", geo.scalar[p], expected);
        }
    }

    #[test]
    fn perturbed_metric_symmetries() {
        let mut rng = seeded(3);
        let h = FourierSymTensor::random(3, 1, 3, 0.05, &mut rng);
        let g = FourierMetric::perturbed(h).unwrap();
        let grid = Grid::new(3, 12).unwrap();
        let geo = metric_curvature(&GridMetric::from_fourier(&grid, &g).unwrap()).unwrap();
        assert!(geo.riemann_symmetry_residual() < 1e-9);
    }

    #[test]
    fn negative_metric_reported() {
        let grid = Grid::new(2, 4).unwrap();
        let m =
            GridMetric::from_fn(&grid, |x| DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, x[0] - 1.0])));
        assert!(matches!(metric_curvature(&m), Err(Error::NonPositiveMetric { index: 0 })));
    }
}
