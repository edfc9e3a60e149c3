//! First eigenvalue of the conformal Laplacian `−Δ_g + c_n S_g` and its
//! variations at a flat metric.
//!
//! The discrete problem is the symmetric generalized eigenproblem
//! `A x = λ B x` with `A = −Σ ∂_a(√g g^{ab} ∂_b) + c_n S √g` and
//! `B = diag(√g)`, where `∂` is the spectral derivative on the grid. The
//! smallest eigenpair is found by shifted inverse iteration; each shifted
//! solve uses conjugate gradients preconditioned by the flat Helmholtz
//! inverse.

use super::field::FourierSymTensor;
use super::grid::Grid;
use super::metric::{metric_curvature, GridMetric};
use crate::error::{Error, Result};

/// `c_n = (n − 2) / (4(n − 1))`.
pub fn conformal_constant(n: usize) -> f64 {
    (n as f64 - 2.0) / (4.0 * (n as f64 - 1.0))
}

#[derive(Clone, Copy, Debug)]
pub struct EigenOptions {
    /// Bound on `‖(−Δ + c_n S)ψ − λψ‖ / ‖ψ‖` in `L²(dV_g)`.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub cg_tolerance: f64,
    pub cg_max_iterations: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { tolerance: 1e-10, max_iterations: 10_000, cg_tolerance: 1e-13, cg_max_iterations: 2_000 }
    }
}

#[derive(Clone, Debug)]
pub struct LambdaSolution {
    pub lambda: f64,
    /// Eigenfunction samples on the grid, normalized by `∫ψ dV_g = 1`.
    pub psi: Vec<f64>,
    pub c_n: f64,
    pub residual: f64,
    pub iterations: usize,
    pub volume: f64,
}

impl LambdaSolution {
    pub fn min_psi(&self) -> f64 {
        self.psi.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

struct Operator<'a> {
    grid: &'a Grid,
    n: usize,
    /// `√g g^{ab}`, row-major in `(a, b)`.
    w: Vec<Vec<f64>>,
    potential: Vec<f64>,
    sqrt_g: Vec<f64>,
}

impl Operator<'_> {
    fn apply(&self, x: &[f64], shift: f64) -> Vec<f64> {
        let n = self.n;
        let grad = self.grid.gradient(x);
        let mut out: Vec<f64> =
            x.iter().zip(&self.potential).zip(&self.sqrt_g).map(|((v, p), s)| (p - shift * s) * v).collect();
        for a in 0..n {
            let flux: Vec<f64> =
                (0..x.len()).map(|p| (0..n).map(|b| self.w[a * n + b][p] * grad[b][p]).sum()).collect();
            let div = self.grid.deriv(&flux, a);
            for (o, d) in out.iter_mut().zip(div) {
                *o -= d;
            }
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn pcg(op: &Operator, shift: f64, rhs: &[f64], x0: &[f64], mu: f64, opts: &EigenOptions) -> Result<Vec<f64>> {
    let mut x = x0.to_vec();
    let ax = op.apply(&x, shift);
    let mut r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let target = opts.cg_tolerance * dot(rhs, rhs).sqrt();
    let mut z = op.grid.helmholtz_inverse(&r, mu);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for _ in 0..opts.cg_max_iterations {
        if dot(&r, &r).sqrt() <= target {
            return Ok(x);
        }
        let ap = op.apply(&p, shift);
        let curvature = dot(&p, &ap);
        if curvature <= 0.0 {
            return Err(Error::Precondition("shifted operator is not positive definite".into()));
        }
        let alpha = rz / curvature;
        for i in 0..x.len() {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        z = op.grid.helmholtz_inverse(&r, mu);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..p.len() {
            p[i] = z[i] + beta * p[i];
        }
    }
    let res = dot(&r, &r).sqrt() / dot(rhs, rhs).sqrt();
    Err(Error::EigenNonConvergence { iterations: opts.cg_max_iterations, residual: res })
}

pub fn lambda_eig(metric: &GridMetric) -> Result<LambdaSolution> {
    lambda_eig_with(metric, &EigenOptions::default())
}

pub fn lambda_eig_with(metric: &GridMetric, opts: &EigenOptions) -> Result<LambdaSolution> {
    let grid = metric.grid();
    if grid.size().is_multiple_of(2) {
        return Err(Error::Precondition(
            "the eigen-solver needs an odd grid size; the Nyquist slot of an even grid carries spurious eigenvalues"
                .into(),
        ));
    }
    let geo = metric_curvature(metric)?;
    let n = grid.n();
    let len = grid.len();
    let c_n = conformal_constant(n);
    let sqrt_g = geo.sqrt_det().to_vec();
    let g_inv = geo.inverse_metric();
    let w: Vec<Vec<f64>> = (0..n * n).map(|ab| g_inv[ab].iter().zip(&sqrt_g).map(|(a, s)| a * s).collect()).collect();
    let cs: Vec<f64> = geo.scalar().iter().map(|s| c_n * s).collect();
    let potential: Vec<f64> = cs.iter().zip(&sqrt_g).map(|(c, s)| c * s).collect();
    let op = Operator { grid, n, w, potential, sqrt_g: sqrt_g.clone() };

    // The Rayleigh quotient is bounded below by min c_n S, so this shift
    // keeps A − σB positive definite.
    let base_shift = cs.iter().copied().fold(f64::INFINITY, f64::min) - 0.05;
    let mu_for =
        |shift: f64| (cs.iter().zip(&sqrt_g).map(|(c, s)| (c - shift) * s).sum::<f64>() / len as f64).max(1e-3);

    let b_norm = |x: &[f64]| x.iter().zip(&sqrt_g).map(|(v, s)| v * v * s).sum::<f64>().sqrt();
    let mut x = vec![1.0; len];
    let nx = b_norm(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    for it in 1..=opts.max_iterations {
        let ax = op.apply(&x, 0.0);
        let bx: Vec<f64> = x.iter().zip(&sqrt_g).map(|(v, s)| v * s).collect();
        lambda = dot(&x, &ax) / dot(&x, &bx);
        // ‖r/√g‖ in L²(dV_g) relative to ‖x‖ in L²(dV_g).
        residual = (ax.iter().zip(&bx).zip(&sqrt_g).map(|((a, b), s)| (a - lambda * b).powi(2) / s).sum::<f64>())
            .sqrt()
            / b_norm(&x);
        iterations = it;
        if residual <= opts.tolerance {
            break;
        }
        // Some eigenvalue lies within `residual` of the Rayleigh quotient; once
        // the residual is small that eigenvalue is the lowest one and the
        // shift can move up to it.
        let tight = lambda - 2.0 * residual;
        let attempt = if residual < 1e-2 && tight > base_shift {
            pcg(&op, tight, &bx, &x, mu_for(tight), opts).ok()
        } else {
            None
        };
        let mut y = match attempt {
            Some(y) => y,
            None => pcg(&op, base_shift, &bx, &x, mu_for(base_shift), opts)?,
        };
        let ny = b_norm(&y);
        y.iter_mut().for_each(|v| *v /= ny);
        x = y;
    }
    if residual > opts.tolerance {
        return Err(Error::EigenNonConvergence { iterations, residual });
    }
    let integral = geo.integrate(&x);
    let psi: Vec<f64> = x.iter().map(|v| v / integral).collect();
    if psi.iter().any(|&v| v <= 0.0) {
        return Err(Error::Precondition("first eigenfunction is not positive on the grid".into()));
    }
    Ok(LambdaSolution { lambda, psi, c_n, residual, iterations, volume: geo.volume() })
}

/// Five-point estimates of `λ̇(0)` and `λ̈(0)` along `g0 + t h`.
#[derive(Clone, Debug)]
pub struct LambdaVariation {
    pub step: f64,
    /// `λ(g0 + j·step·h)` for `j = −2, …, 2`.
    pub values: [f64; 5],
    pub first: f64,
    pub second: f64,
    /// Same estimates at half the step.
    pub first_half: f64,
    pub second_half: f64,
    /// Richardson combinations `(16 D(t/2) − D(t)) / 15`.
    pub first_extrapolated: f64,
    pub second_extrapolated: f64,
}

fn stencil(values: &[f64; 5], t: f64) -> (f64, f64) {
    let [m2, m1, z, p1, p2] = *values;
    let first = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * t);
    let second = (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * t * t);
    (first, second)
}

/// Variations of `λ` along `g0 + t h` with `g0` a sampled metric.
pub fn lambda_variations(g0: &GridMetric, h: &FourierSymTensor, step: f64) -> Result<LambdaVariation> {
    let hs = g0.grid().sample_sym(h);
    let eval = |t: f64| -> Result<f64> { Ok(lambda_eig(&g0.plus(&hs, t))?.lambda) };
    let zero = eval(0.0)?;
    let mut full = [0.0; 5];
    let mut half = [0.0; 5];
    full[2] = zero;
    half[2] = zero;
    for (slot, j) in [(0usize, -2.0), (1, -1.0), (3, 1.0), (4, 2.0)] {
        full[slot] = eval(j * step)?;
        half[slot] = eval(j * step / 2.0)?;
    }
    let (first, second) = stencil(&full, step);
    let (first_half, second_half) = stencil(&half, step / 2.0);
    Ok(LambdaVariation {
        step,
        values: full,
        first,
        second,
        first_half,
        second_half,
        first_extrapolated: (16.0 * first_half - first) / 15.0,
        second_extrapolated: (16.0 * second_half - second) / 15.0,
    })
}

/// `−(n−2)/(8(n−1)) · (1/Vol) ∫ |∇h̄|²` on a flat torus, the second
/// variation predicted for unit volume.
pub fn flat_second_variation(h: &FourierSymTensor) -> f64 {
    let n = h.n() as f64;
    let tt = super::flat::tt_project(h).h_bar;
    let form = super::flat::lichnerowicz_form(&tt) / tt.volume();
    -(n - 2.0) / (8.0 * (n - 1.0)) * form
}
