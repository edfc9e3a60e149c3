//! Covariant tensor calculus on a grid metric and the linearized curvature
//! formulas.
//!
//! Sampled tensors are stored as component arrays: a 1-form has `n` arrays,
//! a symmetric 2-tensor `n²` arrays indexed `i * n + j`.
//! Conventions: `Δ = tr Hess`, `(δh)_j = −g^{ia}∇_a h_ij`,
//! `δω = −g^{ab}∇_a ω_b`, `δ*ω = sym ∇ω` and `∇*∇h = −g^{ab}∇_a∇_b h`.

use rayon::prelude::*;

use super::metric::{metric_curvature, GridGeometry, GridMetric};
use crate::error::Result;

pub type Scalar = Vec<f64>;
pub type OneForm = Vec<Vec<f64>>;
pub type Sym2 = Vec<Vec<f64>>;

fn zeros(len: usize, count: usize) -> Vec<Vec<f64>> {
    vec![vec![0.0; len]; count]
}

impl GridGeometry {
    fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn d(&self, f: &[f64]) -> OneForm {
        self.grid.gradient(f)
    }

    /// `(∇ω)_{ab} = ∂_a ω_b − Γ^p_ab ω_p`, stored at `a * n + b`.
    pub fn nabla_1form(&self, w: &OneForm) -> Vec<Vec<f64>> {
        let n = self.n();
        let dw: Vec<Vec<Vec<f64>>> = w.par_iter().map(|c| self.grid.gradient(c)).collect();
        let mut out = zeros(self.len(), n * n);
        for a in 0..n {
            for b in 0..n {
                let o = &mut out[a * n + b];
                o.copy_from_slice(&dw[b][a]);
                for pp in 0..n {
                    let gam = &self.gamma[(pp * n + a) * n + b];
                    for (x, (g, wv)) in o.iter_mut().zip(gam.iter().zip(&w[pp])) {
                        *x -= g * wv;
                    }
                }
            }
        }
        out
    }

    /// `(∇h)_{aij} = ∂_a h_ij − Γ^p_ai h_pj − Γ^p_aj h_ip`, stored at
    /// `(a * n + i) * n + j`.
    pub fn nabla_sym(&self, h: &Sym2) -> Vec<Vec<f64>> {
        let n = self.n();
        let dh: Vec<Vec<Vec<f64>>> = h.par_iter().map(|c| self.grid.gradient(c)).collect();
        let len = self.len();
        let mut out = zeros(len, n * n * n);
        out.par_iter_mut().enumerate().for_each(|(idx, o)| {
            let (a, i, j) = (idx / (n * n), (idx / n) % n, idx % n);
            o.copy_from_slice(&dh[i * n + j][a]);
            for pp in 0..n {
                let g1 = &self.gamma[(pp * n + a) * n + i];
                let g2 = &self.gamma[(pp * n + a) * n + j];
                let h1 = &h[pp * n + j];
                let h2 = &h[i * n + pp];
                for x in 0..len {
                    o[x] -= g1[x] * h1[x] + g2[x] * h2[x];
                }
            }
        });
        out
    }

    pub fn hessian(&self, f: &[f64]) -> Sym2 {
        symmetrize(self.n(), &self.nabla_1form(&self.d(f)))
    }

    /// `g^{ab} T_ab` for a 2-tensor stored as `n²` arrays.
    pub fn contract(&self, t: &[Vec<f64>]) -> Scalar {
        let n = self.n();
        let mut out = vec![0.0; self.len()];
        for a in 0..n {
            for b in 0..n {
                for (x, o) in out.iter_mut().enumerate() {
                    *o += self.g_inv[a * n + b][x] * t[a * n + b][x];
                }
            }
        }
        out
    }

    pub fn laplacian(&self, f: &[f64]) -> Scalar {
        self.contract(&self.hessian(f))
    }

    pub fn trace(&self, h: &Sym2) -> Scalar {
        self.contract(h)
    }

    pub fn divergence(&self, h: &Sym2) -> OneForm {
        let n = self.n();
        let t = self.nabla_sym(h);
        let mut out = zeros(self.len(), n);
        for j in 0..n {
            for a in 0..n {
                for i in 0..n {
                    let gi = &self.g_inv[i * n + a];
                    let tv = &t[(a * n + i) * n + j];
                    for (x, o) in out[j].iter_mut().enumerate() {
                        *o -= gi[x] * tv[x];
                    }
                }
            }
        }
        out
    }

    pub fn codifferential(&self, w: &OneForm) -> Scalar {
        self.contract(&self.nabla_1form(w)).into_iter().map(|v| -v).collect()
    }

    pub fn delta_star(&self, w: &OneForm) -> Sym2 {
        symmetrize(self.n(), &self.nabla_1form(w))
    }

    /// `∇*∇h = −g^{ab}(∇_a ∇_b h)`.
    pub fn rough_laplacian(&self, h: &Sym2) -> Sym2 {
        let n = self.n();
        let len = self.len();
        let t = self.nabla_sym(h);
        let dt: Vec<Vec<Vec<f64>>> = t.par_iter().map(|c| self.grid.gradient(c)).collect();
        let ti = |b: usize, i: usize, j: usize| (b * n + i) * n + j;
        let mut out = zeros(len, n * n);
        out.par_iter_mut().enumerate().for_each(|(ij, o)| {
            let (i, j) = (ij / n, ij % n);
            for a in 0..n {
                for b in 0..n {
                    let ginv = &self.g_inv[a * n + b];
                    for x in 0..len {
                        let mut v = dt[ti(b, i, j)][a][x];
                        for pp in 0..n {
                            v -= self.gamma[(pp * n + a) * n + b][x] * t[ti(pp, i, j)][x]
                                + self.gamma[(pp * n + a) * n + i][x] * t[ti(b, pp, j)][x]
                                + self.gamma[(pp * n + a) * n + j][x] * t[ti(b, i, pp)][x];
                        }
                        o[x] -= ginv[x] * v;
                    }
                }
            }
        });
        symmetrize(n, &out)
    }

    /// `(R̊h)_ij = R_ikjl h^{kl}` with indices raised by `g`.
    pub fn ring(&self, h: &Sym2) -> Sym2 {
        let n = self.n();
        let len = self.len();
        let up = self.raise_both(h);
        let mut out = zeros(len, n * n);
        out.par_iter_mut().enumerate().for_each(|(ij, o)| {
            let (i, j) = (ij / n, ij % n);
            for k in 0..n {
                for l in 0..n {
                    let r = &self.riemann[((i * n + k) * n + j) * n + l];
                    let u = &up[k * n + l];
                    for x in 0..len {
                        o[x] += r[x] * u[x];
                    }
                }
            }
        });
        symmetrize(n, &out)
    }

    /// `h^{kl} = g^{ka} h_ab g^{bl}`.
    fn raise_both(&self, h: &Sym2) -> Sym2 {
        let n = self.n();
        let len = self.len();
        let mut out = zeros(len, n * n);
        for x in 0..len {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            acc += self.g_inv[k * n + a][x] * h[a * n + b][x] * self.g_inv[b * n + l][x];
                        }
                    }
                    out[k * n + l][x] = acc;
                }
            }
        }
        out
    }

    /// Symmetrized composition `½(A g⁻¹ B + B g⁻¹ A)`.
    pub fn circ(&self, a: &Sym2, b: &Sym2) -> Sym2 {
        let n = self.n();
        let len = self.len();
        let mut out = zeros(len, n * n);
        for x in 0..len {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0.0;
                    for p in 0..n {
                        for q in 0..n {
                            let gi = self.g_inv[p * n + q][x];
                            acc += a[i * n + p][x] * gi * b[q * n + j][x] + b[i * n + p][x] * gi * a[q * n + j][x];
                        }
                    }
                    out[i * n + j][x] = 0.5 * acc;
                }
            }
        }
        out
    }

    /// Pointwise `⟨h, k⟩ = h_ij k_ab g^{ia} g^{jb}`.
    pub fn inner_sym(&self, h: &Sym2, k: &Sym2) -> Scalar {
        let n = self.n();
        let up = self.raise_both(h);
        let mut out = vec![0.0; self.len()];
        for c in 0..n * n {
            for (x, o) in out.iter_mut().enumerate() {
                *o += up[c][x] * k[c][x];
            }
        }
        out
    }

    pub fn inner_1form(&self, w: &OneForm, v: &OneForm) -> Scalar {
        let n = self.n();
        let mut out = vec![0.0; self.len()];
        for a in 0..n {
            for b in 0..n {
                for (x, o) in out.iter_mut().enumerate() {
                    *o += self.g_inv[a * n + b][x] * w[a][x] * v[b][x];
                }
            }
        }
        out
    }

    /// `∫ ⟨h, k⟩ dV_g`.
    pub fn l2_inner_sym(&self, h: &Sym2, k: &Sym2) -> f64 {
        self.integrate(&self.inner_sym(h, k))
    }

    pub fn l2_inner_1form(&self, w: &OneForm, v: &OneForm) -> f64 {
        self.integrate(&self.inner_1form(w, v))
    }

    /// `𝓛h = ∇*∇h − 2R̊h`.
    pub fn lichnerowicz(&self, h: &Sym2) -> Sym2 {
        let rough = self.rough_laplacian(h);
        let ring = self.ring(h);
        combine(&[(1.0, &rough), (-2.0, &ring)])
    }

    pub fn ricci_tensor(&self) -> Sym2 {
        self.ricci.clone()
    }
}

/// `½(T_ab + T_ba)`.
pub fn symmetrize(n: usize, t: &[Vec<f64>]) -> Sym2 {
    let mut out = zeros(t[0].len(), n * n);
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = t[i * n + j].iter().zip(&t[j * n + i]).map(|(a, b)| 0.5 * (a + b)).collect();
        }
    }
    out
}

/// `Σ c_r T_r` over component arrays of equal shape.
pub fn combine(terms: &[(f64, &Vec<Vec<f64>>)]) -> Vec<Vec<f64>> {
    let (_, first) = terms[0];
    let mut out = zeros(first[0].len(), first.len());
    for (c, t) in terms {
        for (o, v) in out.iter_mut().zip(t.iter()) {
            for (a, b) in o.iter_mut().zip(v) {
                *a += c * b;
            }
        }
    }
    out
}

/// Largest absolute entry over all component arrays.
pub fn max_abs(t: &[Vec<f64>]) -> f64 {
    t.iter().flat_map(|c| c.iter()).fold(0.0, |m, v| m.max(v.abs()))
}

pub fn max_abs_scalar(f: &[f64]) -> f64 {
    f.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Right-hand sides of the linearized curvature and Laplacian formulas.
#[derive(Clone, Debug)]
pub struct Linearized {
    pub ric_dot: Sym2,
    pub s_dot: Scalar,
    pub lap_dot_f: Scalar,
}

/// `Riċ = ½(∇*∇h − 2R̊h) − δ*δh − ½D²tr h + Ric∘h`,
/// `Ṡ = −⟨h, Ric⟩ + δ²h − Δtr h`,
/// `Δ̇f = −⟨h, D²f⟩ + ⟨δh + ½ d tr h, df⟩`.
pub fn linearized_formulas(geo: &GridGeometry, h: &Sym2, f: &[f64]) -> Linearized {
    let n = geo.n();
    let delta_h = geo.divergence(h);
    let tr = geo.trace(h);
    let lich = geo.lichnerowicz(h);
    let dsd = geo.delta_star(&delta_h);
    let hess_tr = geo.hessian(&tr);
    let ric = geo.ricci_tensor();
    let ric_h = geo.circ(&ric, h);
    let ric_dot = combine(&[(0.5, &lich), (-1.0, &dsd), (-0.5, &hess_tr), (1.0, &ric_h)]);

    let h_ric = geo.inner_sym(h, &ric);
    let dd = geo.codifferential(&delta_h);
    let lap_tr = geo.laplacian(&tr);
    let s_dot = h_ric.iter().zip(&dd).zip(&lap_tr).map(|((a, b), c)| -a + b - c).collect();

    let hess_f = geo.hessian(f);
    let df = geo.d(f);
    let dtr = geo.d(&tr);
    let w: OneForm = (0..n).map(|a| delta_h[a].iter().zip(&dtr[a]).map(|(x, y)| x + 0.5 * y).collect()).collect();
    let hf = geo.inner_sym(h, &hess_f);
    let wf = geo.inner_1form(&w, &df);
    let lap_dot_f = hf.iter().zip(&wf).map(|(a, b)| -a + b).collect();
    Linearized { ric_dot, s_dot, lap_dot_f }
}

/// Nonlinear quantities compared against the linearized formulas.
#[derive(Clone, Debug)]
pub struct Nonlinear {
    pub ricci: Sym2,
    pub scalar: Scalar,
    pub lap_f: Scalar,
}

pub fn nonlinear(metric: &GridMetric, f: &[f64]) -> Result<Nonlinear> {
    let geo = metric_curvature(metric)?;
    Ok(Nonlinear { ricci: geo.ricci.clone(), scalar: geo.scalar.clone(), lap_f: geo.laplacian(f) })
}

/// Central-difference comparison of one linearized quantity.
#[derive(Clone, Debug, PartialEq)]
pub struct FdSeries {
    pub name: &'static str,
    pub steps: Vec<f64>,
    /// Relative error of the central difference at each step.
    pub errors: Vec<f64>,
    /// Relative error of the Richardson combination of consecutive steps.
    pub richardson: Vec<f64>,
    /// Observed orders `log2(e_j / e_{j+1})`.
    pub orders: Vec<f64>,
}

impl FdSeries {
    /// Smallest relative error over all raw and extrapolated estimates.
    pub fn best_error(&self) -> f64 {
        self.errors.iter().chain(&self.richardson).fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Order estimated from the two largest steps, where truncation dominates.
    pub fn leading_order(&self) -> f64 {
        self.orders.first().copied().unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug)]
pub struct LinearizationReport {
    pub ricci: FdSeries,
    pub scalar: FdSeries,
    pub laplacian: FdSeries,
}

/// Compares the linearized formulas with central finite differences of the
/// nonlinear pipeline along `g + t h`, at each step `t` (halving sequence).
pub fn linearization_check(metric: &GridMetric, h: &Sym2, f: &[f64], steps: &[f64]) -> Result<LinearizationReport> {
    let geo = metric_curvature(metric)?;
    let lin = linearized_formulas(&geo, h, f);
    let mut fd_ric = Vec::new();
    let mut fd_s = Vec::new();
    let mut fd_l = Vec::new();
    for &t in steps {
        let plus = nonlinear(&metric.plus(h, t), f)?;
        let minus = nonlinear(&metric.plus(h, -t), f)?;
        let c = 1.0 / (2.0 * t);
        fd_ric.push(combine(&[(c, &plus.ricci), (-c, &minus.ricci)]));
        fd_s.push(plus.scalar.iter().zip(&minus.scalar).map(|(a, b)| c * (a - b)).collect::<Vec<_>>());
        fd_l.push(plus.lap_f.iter().zip(&minus.lap_f).map(|(a, b)| c * (a - b)).collect::<Vec<_>>());
    }
    let ricci = series("ricci", steps, &fd_ric, &lin.ric_dot);
    let scalar = series("scalar", steps, &fd_s.into_iter().map(|v| vec![v]).collect::<Vec<_>>(), &vec![lin.s_dot]);
    let laplacian =
        series("laplacian", steps, &fd_l.into_iter().map(|v| vec![v]).collect::<Vec<_>>(), &vec![lin.lap_dot_f]);
    Ok(LinearizationReport { ricci, scalar, laplacian })
}

fn series(name: &'static str, steps: &[f64], fd: &[Vec<Vec<f64>>], exact: &Vec<Vec<f64>>) -> FdSeries {
    let scale = max_abs(exact).max(f64::MIN_POSITIVE);
    let rel = |approx: &Vec<Vec<f64>>| max_abs(&combine(&[(1.0, approx), (-1.0, exact)])) / scale;
    let errors: Vec<f64> = fd.iter().map(rel).collect();
    let richardson = fd
        .windows(2)
        .zip(steps.windows(2))
        .map(|(w, s)| {
            let ratio = (s[0] / s[1]).powi(2);
            rel(&combine(&[(ratio / (ratio - 1.0), &w[1]), (-1.0 / (ratio - 1.0), &w[0])]))
        })
        .collect();
    let orders =
        errors.windows(2).zip(steps.windows(2)).map(|(e, s)| (e[0] / e[1]).ln() / (s[0] / s[1]).ln()).collect();
    FdSeries { name, steps: steps.to_vec(), errors, richardson, orders }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::torus::field::{FourierScalarField, FourierSymTensor};
    use crate::torus::grid::Grid;
    use crate::torus::metric::FourierMetric;
    use nalgebra::DMatrix;

    fn seeded_metric(n: usize, size: usize, seed: u64) -> GridMetric {
        let mut rng = seeded(seed);
        let p = FourierSymTensor::random(n, 1, 2, 0.02, &mut rng);
        let grid = Grid::new(n, size).unwrap();
        GridMetric::from_fourier(&grid, &FourierMetric::perturbed(p).unwrap()).unwrap()
    }

    #[test]
    fn flat_laplacian_and_divergence_symbols() {
        let grid = Grid::new(3, 8).unwrap();
        let geo = metric_curvature(&GridMetric::flat(&grid)).unwrap();
        let f = grid.sample_fn(|x| (x[0] + 2.0 * x[2]).cos());
        let lap = geo.laplacian(&f);
        for (a, b) in lap.iter().zip(&f) {
            assert!((a + 5.0 * b).abs() < 1e-12);
        }
        // h = A cos(k·x) ⇒ (δh)_j = A_ij k_i sin(k·x)
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 0.5, 0.0, 0.5, -2.0, 0.3, 0.0, 0.3, 0.7]);
        let h = grid.sample_sym(&FourierSymTensor::cos_mode(vec![1, 0, 2], &a).unwrap());
        let dh = geo.divergence(&h);
        for (p, x) in grid.points().enumerate() {
            let s = (x[0] + 2.0 * x[2]).sin();
            for j in 0..3 {
                let expected = (a[(0, j)] * 1.0 + a[(2, j)] * 2.0) * s;
                assert!((dh[j][p] - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn delta_star_is_adjoint_of_delta() {
        let metric = seeded_metric(3, 16, 11);
        let geo = metric_curvature(&metric).unwrap();
        let mut rng = seeded(12);
        let h = metric.grid().sample_sym(&FourierSymTensor::random(3, 2, 4, 1.0, &mut rng));
        let w: OneForm =
            (0..3).map(|_| metric.grid().sample_scalar(&FourierScalarField::random(3, 2, 3, 1.0, &mut rng))).collect();
        let lhs = geo.l2_inner_1form(&geo.divergence(&h), &w);
        let rhs = geo.l2_inner_sym(&h, &geo.delta_star(&w));
        assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn flat_constant_h_linearization() {
        let grid = Grid::new(3, 8).unwrap();
        let geo = metric_curvature(&GridMetric::flat(&grid)).unwrap();
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 0.2, 0.0, 0.2, 0.5, 0.1, 0.0, 0.1, -0.4]);
        let h = grid.sample_sym(&FourierSymTensor::constant(&a));
        let f = grid.sample_fn(|x| (x[1] - x[2]).sin());
        let lin = linearized_formulas(&geo, &h, &f);
        assert!(max_abs(&lin.ric_dot) < 1e-13);
        assert!(max_abs_scalar(&lin.s_dot) < 1e-13);
        let hess = geo.hessian(&f);
        let expected: Vec<f64> = geo.inner_sym(&h, &hess).iter().map(|v| -v).collect();
        let diff: Vec<f64> = lin.lap_dot_f.iter().zip(&expected).map(|(a, b)| a - b).collect();
        assert!(max_abs_scalar(&diff) < 1e-13);
    }

    #[test]
    fn nonflat_linearization_matches_finite_differences() {
        let metric = seeded_metric(3, 16, 5);
        let mut rng = seeded(6);
        let h = metric.grid().sample_sym(&FourierSymTensor::random(3, 1, 3, 0.1, &mut rng));
        let f = metric.grid().sample_scalar(&FourierScalarField::random(3, 1, 3, 1.0, &mut rng));
        let steps: Vec<f64> = (0..5).map(|j| 0.02 / 2f64.powi(j)).collect();
        let rep = linearization_check(&metric, &h, &f, &steps).unwrap();
        for s in [&rep.ricci, &rep.scalar, &rep.laplacian] {
            assert!(s.best_error() < 1e-6, "{s:?}");
            assert!(s.leading_order() > 1.9, "{s:?}");
        }
    }
}
