//! The warped metric `(1 − 2m/r)⁻¹dr² + r²ds²_{S²} + g(r)` on `R³ × M` and
//! its closed-form curvature.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::fiber::{FiberFamily, RadialJet};
use super::mass::{MassProfile, Schedule};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WarpedMetric {
    pub mass: MassProfile,
    pub fiber: FiberFamily,
    pub schedule: Schedule,
}

/// Ricci components: `r00` in the unit radial direction, `rii` on each of
/// the coordinate fields `U_i` of the round `S²` (with `|U_i|² = r²`), and
/// `rab` in fiber coordinates.
#[derive(Clone, Debug)]
pub struct WarpedRicci {
    pub r00: f64,
    pub rii: f64,
    pub rab: DMatrix<f64>,
    /// `r00 + 2·rii/r² + g^{αβ} rab`.
    pub trace: f64,
}

struct Pointwise {
    m: f64,
    dm: f64,
    lapse: f64,
    fiber: RadialJet,
    s: f64,
}

impl WarpedMetric {
    pub fn new(mass: MassProfile, fiber: FiberFamily, schedule: Schedule) -> Self {
        Self { mass, fiber, schedule }
    }

    /// Product metric `R³ × (M, g_s)`.
    pub fn product(fiber: FiberFamily, s: f64) -> Self {
        Self::new(MassProfile::Zero, fiber, Schedule::Constant { s })
    }

    pub fn dim(&self) -> usize {
        3 + self.fiber.dim()
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.mass.breakpoints();
        b.extend(self.schedule.breakpoints());
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    fn pointwise(&self, r: f64, q: &[f64]) -> Result<Pointwise> {
        if !(r > 0.0) {
            return Err(Error::Precondition(format!("radius must be positive, got {r}")));
        }
        if q.len() != self.fiber.dim() {
            return Err(Error::DimensionMismatch { expected: self.fiber.dim(), got: q.len() });
        }
        let mv = self.mass.eval(r);
        if 2.0 * mv.m >= r {
            return Err(Error::Horizon { r, two_m: 2.0 * mv.m });
        }
        let sv = self.schedule.eval(r);
        let fiber = RadialJet::new(&self.fiber.jet(sv.s, q), sv.rate, sv.accel);
        Ok(Pointwise { m: mv.m, dm: mv.dm, lapse: 1.0 - 2.0 * mv.m / r, fiber, s: sv.s })
    }

    /// Full metric in coordinates `(r, θ, φ, y)`.
    pub fn coordinate_metric(&self, x: &[f64]) -> DMatrix<f64> {
        let (r, theta) = (x[0], x[1]);
        let k = self.fiber.dim();
        let mut g = DMatrix::zeros(3 + k, 3 + k);
        g[(0, 0)] = 1.0 / (1.0 - 2.0 * self.mass.m(r) / r);
        g[(1, 1)] = r * r;
        g[(2, 2)] = r * r * theta.sin().powi(2);
        let gf = self.fiber.metric(self.schedule.eval(r).s, &x[3..]);
        g.view_mut((3, 3), (k, k)).copy_from(&gf);
        g
    }
}

/// Scalar curvature of the warped metric at `(r, q)`.
pub fn warped_scalar(w: &WarpedMetric, r: f64, q: &[f64]) -> Result<f64> {
    let p = w.pointwise(r, q)?;
    let t = p.fiber.trace();
    let (m, dm) = (p.m, p.dm);
    let sm = w.fiber.scalar(p.s, q);
    Ok(sm + dm * (4.0 / (r * r) + t.g1 / r)
        - m / (r * r) * t.g1
        - p.lapse * (t.g2 + 2.0 / r * t.g1 + 0.25 * t.g1 * t.g1 - 0.25 * t.cross))
}

pub fn warped_ricci(w: &WarpedMetric, r: f64, q: &[f64]) -> Result<WarpedRicci> {
    let p = w.pointwise(r, q)?;
    let t = p.fiber.trace();
    let (m, dm, lapse) = (p.m, p.dm, p.lapse);
    let j = &p.fiber;
    let mixed = (dm * r - m) / (r * r);
    let cross_sq = -t.cross;
    let r00 =
        2.0 * (-m / (r * r * r) + dm / (r * r)) + 0.5 * mixed * t.g1 - 0.5 * lapse * t.g2 - 0.25 * lapse * cross_sq;
    let rii = -m / r + dm + 2.0 * m / r - 0.5 * r * lapse * t.g1;
    let transport = &j.dd - &j.d * &j.g_inv * &j.d;
    let rab = &j.d * (0.5 * mixed) - transport * (0.5 * lapse) - &j.d * (0.25 * lapse * t.g1) - &j.d * (lapse / r)
        + w.fiber.ricci(p.s, q);
    let trace = r00 + 2.0 * rii / (r * r) + (&j.g_inv * &rab).trace();
    Ok(WarpedRicci { r00, rii, rab, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_scalar_is_fiber_scalar() {
        let f = FiberFamily::conformal_torus(0.3, 0.1);
        let w = WarpedMetric::product(f.clone(), 0.4);
        for q in f.samples(5) {
            let s = warped_scalar(&w, 2.5, &q).unwrap();
            assert!((s - f.scalar(0.4, &q)).abs() < 1e-15);
        }
    }

    #[test]
    fn schwarzschild_slice_is_scalar_flat() {
        let w = WarpedMetric::new(
            MassProfile::Constant { m0: 0.7 },
            FiberFamily::flat_torus(2, 1.0, 1.0),
            Schedule::Constant { s: 0.0 },
        );
        let q = [0.1, 0.2];
        assert!(warped_scalar(&w, 3.0, &q).unwrap().abs() < 1e-15);
        let ric = warped_ricci(&w, 3.0, &q).unwrap();
        assert!((ric.r00 + 2.0 * 0.7 / 27.0).abs() < 1e-15);
        assert!((ric.rii - 0.7 / 3.0).abs() < 1e-15);
        assert!(ric.rab.amax() == 0.0);
    }

    #[test]
    fn horizon_is_rejected() {
        let w = WarpedMetric::new(
            MassProfile::Constant { m0: 1.0 },
            FiberFamily::flat_torus(1, 1.0, 1.0),
            Schedule::Constant { s: 0.0 },
        );
        assert!(matches!(warped_scalar(&w, 1.5, &[0.0]), Err(Error::Horizon { .. })));
    }

    #[test]
    fn ricci_trace_matches_scalar() {
        let w = WarpedMetric::new(
            MassProfile::AsymptoticTail { m_inf: -0.4, c: 0.3 },
            FiberFamily::sphere(1.0, 0.6),
            Schedule::Linear { r2: 1.0, r3: 3.0 },
        );
        for r in [1.3, 2.0, 2.9] {
            for q in w.fiber.samples(3) {
                let s = warped_scalar(&w, r, &q).unwrap();
                let ric = warped_ricci(&w, r, &q).unwrap();
                assert!((s - ric.trace).abs() < 1e-12 * s.abs().max(1.0), "r = {r}: {s} vs {}", ric.trace);
            }
        }
    }
}
