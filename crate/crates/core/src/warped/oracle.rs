//! Scalar curvature of the warped metric from finite differences of its
//! coordinate components, independent of the closed-form expressions.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::metric::WarpedMetric;
use crate::error::{Error, Result};
use crate::geometry::{point_curvature, MetricJet};

/// Steps: `base·r` in the radial coordinate and `base` in the angular and
/// fiber coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdSteps {
    pub base: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        Self { base: 1e-3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleEstimate {
    pub value: f64,
    pub error_bar: f64,
    pub coarse: f64,
    pub fine: f64,
}

fn jet(w: &WarpedMetric, x: &[f64], h: &[f64]) -> MetricJet {
    let n = x.len();
    let eval = |shifts: &[(usize, f64)]| -> DMatrix<f64> {
        let mut y = x.to_vec();
        for &(a, d) in shifts {
            y[a] += d;
        }
        w.coordinate_metric(&y)
    };
    let g = eval(&[]);
    let plus: Vec<DMatrix<f64>> = (0..n).map(|a| eval(&[(a, h[a])])).collect();
    let minus: Vec<DMatrix<f64>> = (0..n).map(|a| eval(&[(a, -h[a])])).collect();
    let dg = (0..n).map(|a| (&plus[a] - &minus[a]) / (2.0 * h[a])).collect();
    let mut ddg = vec![vec![DMatrix::zeros(n, n); n]; n];
    for a in 0..n {
        ddg[a][a] = (&plus[a] - &g * 2.0 + &minus[a]) / (h[a] * h[a]);
        for b in a + 1..n {
            let v = (eval(&[(a, h[a]), (b, h[b])]) - eval(&[(a, h[a]), (b, -h[b])]) - eval(&[(a, -h[a]), (b, h[b])])
                + eval(&[(a, -h[a]), (b, -h[b])]))
                / (4.0 * h[a] * h[b]);
            ddg[b][a] = v.clone();
            ddg[a][b] = v;
        }
    }
    MetricJet { g, dg, ddg }
}

fn scalar_at(w: &WarpedMetric, x: &[f64], h: &[f64]) -> Result<f64> {
    point_curvature(&jet(w, x, h))
        .map(|c| c.scalar)
        .ok_or_else(|| Error::Precondition(format!("degenerate coordinate metric at r = {}", x[0])))
}

/// Scalar curvature at `(r, θ = π/2 − 0.3, φ = 0.4, q)` from central
/// differences at steps `h` and `h/2`, combined by Richardson extrapolation.
/// The error bar is the difference between the extrapolated and the fine
/// estimate.
pub fn fd_curvature_oracle(w: &WarpedMetric, r: f64, q: &[f64], steps: FdSteps) -> Result<OracleEstimate> {
    if q.len() != w.fiber.dim() {
        return Err(Error::DimensionMismatch { expected: w.fiber.dim(), got: q.len() });
    }
    let hr = steps.base * r;
    if !(steps.base > 0.0 && steps.base <= 0.05) || r <= 10.0 * hr {
        return Err(Error::StepTooLarge { step: hr, r });
    }
    if w.breakpoints().iter().any(|b| (r - b).abs() < 10.0 * hr) {
        return Err(Error::StepTooLarge { step: hr, r });
    }
    let mut x = vec![r, std::f64::consts::FRAC_PI_2 - 0.3, 0.4];
    x.extend_from_slice(q);
    let mut h = vec![steps.base; x.len()];
    h[0] = hr;
    let coarse = scalar_at(w, &x, &h)?;
    let half: Vec<f64> = h.iter().map(|v| v / 2.0).collect();
    let fine = scalar_at(w, &x, &half)?;
    let value = (4.0 * fine - coarse) / 3.0;
    Ok(OracleEstimate { value, error_bar: (value - fine).abs(), coarse, fine })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warped::fiber::FiberFamily;
    use crate::warped::mass::{MassProfile, Schedule};
    use crate::warped::metric::warped_scalar;

    #[test]
    fn product_sphere_fiber() {
        let w = WarpedMetric::product(FiberFamily::sphere(1.0, 0.5), 0.0);
        let est = fd_curvature_oracle(&w, 2.0, &[1.0, 0.5], FdSteps::default()).unwrap();
        assert!((est.value - 2.0).abs() < 1e-6, "{est:?}");
    }

    #[test]
    fn schwarzschild_slice() {
        let w = WarpedMetric::new(
            MassProfile::Constant { m0: 0.5 },
            FiberFamily::flat_torus(2, 1.0, 1.0),
            Schedule::Constant { s: 0.0 },
        );
        let est = fd_curvature_oracle(&w, 3.0, &[0.2, 0.3], FdSteps::default()).unwrap();
        assert!(est.value.abs() < 1e-6, "{est:?}");
    }

    #[test]
    fn varying_fiber_matches_formula() {
        let w = WarpedMetric::new(
            MassProfile::AsymptoticTail { m_inf: -0.4, c: 0.3 },
            FiberFamily::conformal_torus(0.3, -0.2),
            Schedule::Linear { r2: 1.0, r3: 3.0 },
        );
        let q = [0.7, 0.1];
        let est = fd_curvature_oracle(&w, 2.0, &q, FdSteps::default()).unwrap();
        let exact = warped_scalar(&w, 2.0, &q).unwrap();
        assert!((est.value - exact).abs() < 1e-6f64.max(3.0 * est.error_bar), "{est:?} vs {exact}");
    }

    #[test]
    fn rejects_points_near_breakpoints() {
        let w =
            WarpedMetric::new(MassProfile::Zero, FiberFamily::sphere(1.0, 0.9), Schedule::Linear { r2: 1.0, r3: 3.0 });
        assert!(matches!(
            fd_curvature_oracle(&w, 3.001, &[1.0, 0.0], FdSteps::default()),
            Err(Error::StepTooLarge { .. })
        ));
        assert!(fd_curvature_oracle(&w, 2.0, &[1.0, 0.0], FdSteps { base: 0.5 }).is_err());
    }
}
