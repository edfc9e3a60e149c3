//! One-parameter families `s ↦ g_s` of fiber metrics with closed-form
//! `s`-derivatives and curvature.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of the family. Each parameter is interpolated linearly in
/// `t = eps·s` between its value at `t = 0` and at `t = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiberShape {
    /// Round `S²` of radius `ρ(t)`, chart `(θ, φ)`: `ρ²(dθ² + sin²θ dφ²)`.
    Sphere { rho0: f64, rho1: f64 },
    /// Flat `T^dim` with metric `c(t)² δ`.
    FlatTorus { dim: usize, scale0: f64, scale1: f64 },
    /// `T²` with metric `exp(2a(t) cos y₁)(dy₁² + dy₂²)`.
    ConformalTorus { amp0: f64, amp1: f64 },
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberFamily {
    pub shape: FiberShape,
    /// Reparametrization `s ↦ g_{eps·s}`.
    #[serde(default = "one")]
    pub eps: f64,
}

/// Fiber metric with its first two `s`-derivatives at a point.
#[derive(Clone, Debug)]
pub struct FiberJet {
    pub g: DMatrix<f64>,
    pub ds: DMatrix<f64>,
    pub dss: DMatrix<f64>,
}

impl FiberFamily {
    pub fn new(shape: FiberShape) -> Self {
        Self { shape, eps: 1.0 }
    }

    pub fn sphere(rho0: f64, rho1: f64) -> Self {
        Self::new(FiberShape::Sphere { rho0, rho1 })
    }

    pub fn flat_torus(dim: usize, scale0: f64, scale1: f64) -> Self {
        Self::new(FiberShape::FlatTorus { dim, scale0, scale1 })
    }

    pub fn conformal_torus(amp0: f64, amp1: f64) -> Self {
        Self::new(FiberShape::ConformalTorus { amp0, amp1 })
    }

    /// The family `s ↦ g_{eps·s}` relative to the current one.
    pub fn restricted(&self, eps: f64) -> Self {
        Self { shape: self.shape.clone(), eps: self.eps * eps }
    }

    pub fn dim(&self) -> usize {
        match self.shape {
            FiberShape::Sphere { .. } | FiberShape::ConformalTorus { .. } => 2,
            FiberShape::FlatTorus { dim, .. } => dim,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Precondition(msg.to_string()));
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return bad("family reparametrization eps must lie in (0, 1]");
        }
        match self.shape {
            FiberShape::Sphere { rho0, rho1 } if !(rho0 > 0.0 && rho1 > 0.0) => bad("sphere radii must be positive"),
            FiberShape::FlatTorus { dim, scale0, scale1 } => {
                if dim == 0 || dim > 4 {
                    bad("flat torus fiber dimension must be in 1..=4")
                } else if !(scale0 > 0.0 && scale1 > 0.0) {
                    bad("flat torus scales must be positive")
                } else {
                    Ok(())
                }
            }
            FiberShape::ConformalTorus { amp0, amp1 } if !(amp0.is_finite() && amp1.is_finite()) => {
                bad("conformal amplitudes must be finite")
            }
            _ => Ok(()),
        }
    }

    /// Parameter value and its `s`-derivative.
    fn param(&self, p0: f64, p1: f64, s: f64) -> (f64, f64) {
        let t = self.eps * s;
        (p0 + (p1 - p0) * t, self.eps * (p1 - p0))
    }

    pub fn metric(&self, s: f64, y: &[f64]) -> DMatrix<f64> {
        self.jet(s, y).g
    }

    pub fn jet(&self, s: f64, y: &[f64]) -> FiberJet {
        match self.shape {
            FiberShape::Sphere { rho0, rho1 } => {
                let (f, df) = self.param(rho0, rho1, s);
                let base = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, y[0].sin().powi(2)]));
                FiberJet { g: &base * (f * f), ds: &base * (2.0 * f * df), dss: &base * (2.0 * df * df) }
            }
            FiberShape::FlatTorus { dim, scale0, scale1 } => {
                let (c, dc) = self.param(scale0, scale1, s);
                let id = DMatrix::<f64>::identity(dim, dim);
                FiberJet { g: &id * (c * c), ds: &id * (2.0 * c * dc), dss: &id * (2.0 * dc * dc) }
            }
            FiberShape::ConformalTorus { amp0, amp1 } => {
                let (a, da) = self.param(amp0, amp1, s);
                let c = y[0].cos();
                let g = DMatrix::<f64>::identity(2, 2) * (2.0 * a * c).exp();
                let k = 2.0 * da * c;
                FiberJet { ds: &g * k, dss: &g * (k * k), g }
            }
        }
    }

    pub fn scalar(&self, s: f64, y: &[f64]) -> f64 {
        match self.shape {
            FiberShape::Sphere { rho0, rho1 } => {
                let (f, _) = self.param(rho0, rho1, s);
                2.0 / (f * f)
            }
            FiberShape::FlatTorus { .. } => 0.0,
            FiberShape::ConformalTorus { amp0, amp1 } => {
                let (a, _) = self.param(amp0, amp1, s);
                let u = a * y[0].cos();
                2.0 * u * (-2.0 * u).exp()
            }
        }
    }

    pub fn ricci(&self, s: f64, y: &[f64]) -> DMatrix<f64> {
        match self.shape {
            FiberShape::FlatTorus { dim, .. } => DMatrix::zeros(dim, dim),
            _ => self.metric(s, y) * (0.5 * self.scalar(s, y)),
        }
    }

    /// Deterministic fiber sample points inside the coordinate chart.
    pub fn samples(&self, count: usize) -> Vec<Vec<f64>> {
        let count = count.max(1);
        (0..count)
            .map(|i| {
                let t = (i as f64 + 0.5) / count as f64;
                match self.shape {
                    FiberShape::Sphere { .. } => vec![0.3 + (std::f64::consts::PI - 0.6) * t, 1.0 + 2.0 * t],
                    FiberShape::FlatTorus { dim, .. } => {
                        (0..dim).map(|a| (a as f64 + 1.0) * 2.0 * std::f64::consts::PI * t).collect()
                    }
                    FiberShape::ConformalTorus { .. } => vec![2.0 * std::f64::consts::PI * t, 0.5],
                }
            })
            .collect()
    }
}

/// Scalars of the family that enter the warped-product formulas, for a
/// given rate `ds/dr` (and `d²s/dr²`).
#[derive(Clone, Copy, Debug, Default)]
pub struct RadialTrace {
    /// `g' = g^{αβ} ∂_r g_αβ`.
    pub g1: f64,
    /// `g'' = ∂_r g'`.
    pub g2: f64,
    /// `∂_r g_αβ ∂_r g^{αβ}`.
    pub cross: f64,
}

pub(crate) struct RadialJet {
    pub g_inv: DMatrix<f64>,
    pub d: DMatrix<f64>,
    pub dd: DMatrix<f64>,
}

impl RadialJet {
    pub fn new(jet: &FiberJet, rate: f64, accel: f64) -> Self {
        let g_inv = jet.g.clone().try_inverse().expect("fiber metric must be invertible");
        Self { g_inv, d: &jet.ds * rate, dd: &jet.dss * (rate * rate) + &jet.ds * accel }
    }

    pub fn trace(&self) -> RadialTrace {
        let a = &self.g_inv * &self.d;
        let aa = (&a * &a).trace();
        RadialTrace { g1: a.trace(), g2: (&self.g_inv * &self.dd).trace() - aa, cross: -aa }
    }
}

/// Pointwise bounds of the family over a sample grid.
pub(crate) fn family_bounds(f: &FiberFamily, s: f64, y: &[f64]) -> (f64, f64, f64) {
    let t = RadialJet::new(&f.jet(s, y), 1.0, 0.0).trace();
    (t.cross.abs(), t.g1.abs(), t.g2.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_trace_closed_forms() {
        let f = FiberFamily::sphere(1.0, 0.8);
        let y = [0.7, 0.1];
        let t = RadialJet::new(&f.jet(0.4, &y), 1.0, 0.0).trace();
        let rho = 1.0 - 0.2 * 0.4;
        let dr = -0.2;
        assert!((t.g1 - 4.0 * dr / rho).abs() < 1e-14);
        // g'' = ∂_s(4ρ'/ρ) = −4ρ'²/ρ² for linear ρ
        assert!((t.g2 + 4.0 * dr * dr / (rho * rho)).abs() < 1e-14);
        assert!((t.cross + 8.0 * dr * dr / (rho * rho)).abs() < 1e-14);
    }

    #[test]
    fn derivative_matrices_match_differences() {
        let y = [1.1, 0.3];
        for f in [
            FiberFamily::sphere(1.0, 0.7),
            FiberFamily::conformal_torus(0.2, -0.1),
            FiberFamily::flat_torus(3, 1.0, 1.5),
        ] {
            let yy = &y[..f.dim().min(2)];
            let yv: Vec<f64> = (0..f.dim()).map(|a| yy.get(a).copied().unwrap_or(0.2)).collect();
            let h = 1e-4;
            let j = f.jet(0.5, &yv);
            let d = (f.metric(0.5 + h, &yv) - f.metric(0.5 - h, &yv)) / (2.0 * h);
            let dd = (f.metric(0.5 + h, &yv) - &j.g * 2.0 + f.metric(0.5 - h, &yv)) / (h * h);
            assert!((d - &j.ds).amax() < 1e-7);
            assert!((dd - &j.dss).amax() < 1e-5);
        }
    }

    #[test]
    fn eps_rescales_derivatives() {
        let f = FiberFamily::sphere(1.0, 0.5);
        let r = f.restricted(0.25);
        let y = [1.0, 0.0];
        assert!((r.metric(1.0, &y) - f.metric(0.25, &y)).amax() < 1e-15);
        assert!((r.jet(0.0, &y).ds - f.jet(0.0, &y).ds * 0.25).amax() < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let f = FiberFamily::conformal_torus(0.1, 0.2).restricted(0.5);
        let s = serde_json::to_string(&f).unwrap();
        let back: FiberFamily = serde_json::from_str(&s).unwrap();
        assert_eq!(f, back);
        let parsed: FiberFamily = serde_json::from_str(r#"{"shape":{"kind":"sphere","rho0":1.0,"rho1":0.9}}"#).unwrap();
        assert_eq!(parsed.eps, 1.0);
    }
}
