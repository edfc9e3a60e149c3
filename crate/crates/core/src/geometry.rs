//! Pointwise Levi-Civita geometry from the 2-jet of a metric in coordinates.
//!
//! Conventions follow [`crate::curvalg`]: with the standard
//! `R^m_{kij} = ∂_iΓ^m_jk − ∂_jΓ^m_ik + Γ^m_ipΓ^p_jk − Γ^m_jpΓ^p_ik`, the
//! stored tensor is `R_ijkl = −g_lm R^m_{kij}`, so spheres have `R_1212 > 0`.

use nalgebra::DMatrix;

/// Metric value with first and second coordinate derivatives at a point.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub g: DMatrix<f64>,
    /// `dg[a] = ∂_a g`.
    pub dg: Vec<DMatrix<f64>>,
    /// `ddg[a][b] = ∂_a ∂_b g`.
    pub ddg: Vec<Vec<DMatrix<f64>>>,
}

#[derive(Clone, Debug)]
pub struct PointCurvature {
    pub n: usize,
    pub g_inv: DMatrix<f64>,
    /// `christoffel[(m * n + i) * n + j] = Γ^m_ij`.
    pub christoffel: Vec<f64>,
    /// `riemann[((i * n + j) * n + k) * n + l] = R_ijkl` in coordinates.
    pub riemann: Vec<f64>,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
}

impl PointCurvature {
    #[inline]
    pub fn gamma(&self, m: usize, i: usize, j: usize) -> f64 {
        self.christoffel[(m * self.n + i) * self.n + j]
    }

    #[inline]
    pub fn riemann(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.riemann[((i * self.n + j) * self.n + k) * self.n + l]
    }
}

/// `Γ^m_ij` from the inverse metric and first derivatives.
pub fn christoffel(g_inv: &DMatrix<f64>, dg: &[DMatrix<f64>]) -> Vec<f64> {
    let n = g_inv.nrows();
    // Γ_lij = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
    let mut lower = vec![0.0; n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                lower[(l * n + i) * n + j] = 0.5 * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
            }
        }
    }
    let mut out = vec![0.0; n * n * n];
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                out[(m * n + i) * n + j] = (0..n).map(|l| g_inv[(m, l)] * lower[(l * n + i) * n + j]).sum();
            }
        }
    }
    out
}

/// Returns `None` when the metric is not positive definite.
pub fn point_curvature(jet: &MetricJet) -> Option<PointCurvature> {
    let n = jet.g.nrows();
    let chol = jet.g.clone().cholesky()?;
    let g_inv = chol.inverse();
    let gam = christoffel(&g_inv, &jet.dg);
    let gm = |m: usize, i: usize, j: usize| gam[(m * n + i) * n + j];

    // ∂_a g^{ml} = −g^{mp} ∂_a g_pq g^{ql}
    let dg_inv: Vec<DMatrix<f64>> = jet.dg.iter().map(|d| -(&g_inv * d * &g_inv)).collect();
    // ∂_a Γ^m_ij
    let mut dgam = vec![0.0; n * n * n * n];
    for a in 0..n {
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0.0;
                    for l in 0..n {
                        let lower = 0.5 * (jet.dg[i][(j, l)] + jet.dg[j][(i, l)] - jet.dg[l][(i, j)]);
                        let dlower = 0.5 * (jet.ddg[a][i][(j, l)] + jet.ddg[a][j][(i, l)] - jet.ddg[a][l][(i, j)]);
                        acc += dg_inv[a][(m, l)] * lower + g_inv[(m, l)] * dlower;
                    }
                    dgam[((a * n + m) * n + i) * n + j] = acc;
                }
            }
        }
    }
    let dg_at = |a: usize, m: usize, i: usize, j: usize| dgam[((a * n + m) * n + i) * n + j];

    // Standard R^m_{kij}, then lower and reorder.
    let mut std_r = vec![0.0; n * n * n * n];
    for m in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = dg_at(i, m, j, k) - dg_at(j, m, i, k);
                    for p in 0..n {
                        v += gm(m, i, p) * gm(p, j, k) - gm(m, j, p) * gm(p, i, k);
                    }
                    std_r[((m * n + k) * n + i) * n + j] = v;
                }
            }
        }
    }
    let mut riemann = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    riemann[((i * n + j) * n + k) * n + l] =
                        -(0..n).map(|m| jet.g[(l, m)] * std_r[((m * n + k) * n + i) * n + j]).sum::<f64>();
                }
            }
        }
    }
    let ricci = DMatrix::from_fn(n, n, |j, l| {
        let mut acc = 0.0;
        for i in 0..n {
            for k in 0..n {
                acc += g_inv[(i, k)] * riemann[((i * n + j) * n + k) * n + l];
            }
        }
        acc
    });
    let scalar = g_inv.component_mul(&ricci).sum();
    Some(PointCurvature { n, g_inv, christoffel: gam, riemann, ricci, scalar })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Round sphere of radius ρ in stereographic-free coordinates
    /// `(θ, φ)`: `g = ρ²(dθ² + sin²θ dφ²)`.
    fn sphere_jet(rho: f64, theta: f64) -> MetricJet {
        let s = theta.sin();
        let c = theta.cos();
        let g = DMatrix::from_row_slice(2, 2, &[rho * rho, 0.0, 0.0, rho * rho * s * s]);
        let zero = DMatrix::zeros(2, 2);
        let dth = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, rho * rho * 2.0 * s * c]);
        let ddth = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, rho * rho * 2.0 * (c * c - s * s)]);
        MetricJet { g, dg: vec![dth, zero.clone()], ddg: vec![vec![ddth, zero.clone()], vec![zero.clone(), zero]] }
    }

    #[test]
    fn sphere_sign_and_scalar() {
        let rho = 1.7;
        let pc = point_curvature(&sphere_jet(rho, 0.9)).unwrap();
        assert!(pc.riemann(0, 1, 0, 1) > 0.0);
        assert!((pc.scalar - 2.0 / (rho * rho)).abs() < 1e-13);
        // R_1212 = K det g
        let det = pc.g_inv.clone().try_inverse().unwrap().determinant();
        assert!((pc.riemann(0, 1, 0, 1) - det / (rho * rho)).abs() < 1e-12);
    }

    #[test]
    fn flat_metric_has_zero_curvature() {
        let g = DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.0, 0.3, 1.0, 0.1, 0.0, 0.1, 1.5]);
        let z = DMatrix::zeros(3, 3);
        let jet = MetricJet { g, dg: vec![z.clone(); 3], ddg: vec![vec![z; 3]; 3] };
        let pc = point_curvature(&jet).unwrap();
        assert!(pc.riemann.iter().all(|&v| v == 0.0));
        assert_eq!(pc.scalar, 0.0);
    }

    #[test]
    fn indefinite_metric_rejected() {
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let z = DMatrix::zeros(2, 2);
        let jet = MetricJet { g, dg: vec![z.clone(); 2], ddg: vec![vec![z; 2]; 2] };
        assert!(point_curvature(&jet).is_none());
    }
}
