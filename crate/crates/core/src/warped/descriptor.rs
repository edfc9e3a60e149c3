//! JSON descriptors for warped metrics and the outputs built from them.

use serde::{Deserialize, Serialize};

use super::construct::{
    construct_locsta, cor_infsta, mass_and_order, positivity_scan, Construction, LowerBound, ScanOptions, ScanResult,
};
use super::fiber::FiberFamily;
use super::mass::{MassProfile, Schedule};
use super::metric::{warped_scalar, WarpedMetric};
use super::oracle::{fd_curvature_oracle, FdSteps};
use crate::error::{Error, Result};

/// A fiber family, optionally with an explicit mass profile and schedule.
/// Without a mass profile the descriptor stands for the negative-mass
/// construction on the family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WarpedDescriptor {
    pub fiber: FiberFamily,
    #[serde(default)]
    pub mass: Option<MassProfile>,
    #[serde(default)]
    pub schedule: Option<Schedule>,
}

#[derive(Clone, Debug)]
pub enum Built {
    Construction { construction: Box<Construction>, eps: f64 },
    Explicit(WarpedMetric),
}

impl Built {
    pub fn metric(&self) -> &WarpedMetric {
        match self {
            Built::Construction { construction, .. } => &construction.metric,
            Built::Explicit(w) => w,
        }
    }
}

/// Summary written by `warped build`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuildSummary {
    pub metric: WarpedMetric,
    pub mass: f64,
    pub order: Option<f64>,
    pub a0: Option<f64>,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub r3: Option<f64>,
    pub eps: Option<f64>,
    pub min_s_tilde: Option<f64>,
}

impl WarpedDescriptor {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let d: Self = serde_json::from_str(s)?;
        d.fiber.validate()?;
        if d.mass.is_none() && d.schedule.is_some() {
            return Err(Error::Precondition("a schedule needs an explicit mass profile".into()));
        }
        Ok(d)
    }

    /// The construction (shrinking the family when it is not admissible as
    /// given) or the explicit metric.
    pub fn build(&self) -> Result<Built> {
        match &self.mass {
            Some(m) => Ok(Built::Explicit(WarpedMetric::new(
                m.clone(),
                self.fiber.clone(),
                self.schedule.clone().unwrap_or(Schedule::Constant { s: 0.0 }),
            ))),
            None => match construct_locsta(&self.fiber) {
                Ok(c) => Ok(Built::Construction { construction: Box::new(c), eps: 1.0 }),
                Err(Error::Inadmissible(_)) => {
                    let r = cor_infsta(&self.fiber)?;
                    Ok(Built::Construction { construction: Box::new(r.construction), eps: r.eps })
                }
                Err(e) => Err(e),
            },
        }
    }
}

impl Built {
    pub fn summary(&self) -> Result<BuildSummary> {
        let w = self.metric();
        let mo = mass_and_order(w)?;
        let mut s = BuildSummary {
            metric: w.clone(),
            mass: mo.mass,
            order: mo.order,
            a0: None,
            r1: None,
            r2: None,
            r3: None,
            eps: None,
            min_s_tilde: None,
        };
        if let Built::Construction { construction, eps } = self {
            let p = construction.profile();
            s.a0 = Some(p.a0);
            s.r1 = Some(p.r1);
            s.r2 = Some(p.r2);
            s.r3 = Some(p.r3);
            s.eps = Some(*eps);
            s.min_s_tilde = Some(construction.scan.min_s_tilde);
        }
        Ok(s)
    }

    /// Positivity scan, with the lower bound for constructions.
    pub fn scan(&self) -> Result<ScanResult> {
        match self {
            Built::Construction { construction, .. } => {
                let f = &construction.metric.fiber;
                let bound = LowerBound::new(f, &construction.metric, construction.admissibility.clone())?;
                positivity_scan(&construction.metric, Some(&bound), ScanOptions::default())
            }
            Built::Explicit(w) => positivity_scan(w, None, ScanOptions::default()),
        }
    }

    /// Radial window for oracle comparisons.
    fn oracle_window(&self) -> (f64, f64) {
        let w = self.metric();
        let horizon = match w.mass {
            MassProfile::Constant { m0 } if m0 > 0.0 => 3.0 * m0,
            MassProfile::AsymptoticTail { m_inf, c } => 3.0 * (m_inf.abs() + c.abs()),
            _ => 0.0,
        };
        let lo = horizon.max(1.0);
        let hi =
            (2.0 * w.breakpoints().last().copied().unwrap_or(0.0)).max(w.schedule.settles_at() * 2.0).max(lo + 40.0);
        (lo, hi)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub r: f64,
    pub q_index: usize,
    pub formula: f64,
    pub fd: f64,
    pub error_bar: f64,
    pub abs_diff: f64,
}

/// `count` comparisons of the closed-form scalar curvature with the
/// finite-difference oracle on evenly spaced radii, cycling through the
/// fiber sample points. Radii near breakpoints are nudged outward.
pub fn oracle_rows(built: &Built, count: usize) -> Result<Vec<OracleRow>> {
    let w = built.metric();
    let (lo, hi) = built.oracle_window();
    let qs = w.fiber.samples(8);
    let breaks = w.breakpoints();
    let mut rows = Vec::with_capacity(count);
    for j in 0..count {
        let mut r = lo + (hi - lo) * (j as f64 + 0.5) / count as f64;
        while let Some(b) = breaks.iter().find(|b| (r - **b).abs() <= 20.0 * FdSteps::default().base * r) {
            r = b * (1.0 + 40.0 * FdSteps::default().base);
        }
        let q_index = j % qs.len();
        let q = &qs[q_index];
        let formula = warped_scalar(w, r, q)?;
        let est = fd_curvature_oracle(w, r, q, FdSteps::default())?;
        rows.push(OracleRow {
            r,
            q_index,
            formula,
            fd: est.value,
            error_bar: est.error_bar,
            abs_diff: (formula - est.value).abs(),
        });
    }
    Ok(rows)
}

/// CSV with header `r,q_index,formula,fd,error_bar,abs_diff`.
pub fn oracle_csv(rows: &[OracleRow]) -> String {
    let mut out = String::from("r,q_index,formula,fd,error_bar,abs_diff\n");
    for row in rows {
        out.push_str(&format!(
            "{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            row.r, row.q_index, row.formula, row.fd, row.error_bar, row.abs_diff
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_descriptor_builds_construction() {
        let d = WarpedDescriptor::from_json_str(r#"{"fiber":{"shape":{"kind":"sphere","rho0":1.0,"rho1":0.999}}}"#)
            .unwrap();
        let s = d.build().unwrap().summary().unwrap();
        let (r1, a0) = (s.r1.unwrap(), s.a0.unwrap());
        assert_eq!(s.mass, -r1.powi(3) * a0 / 168.0);
        assert_eq!(s.eps, Some(1.0));
    }

    #[test]
    fn schwarzschild_oracle() {
        let d = WarpedDescriptor::from_json_str(
            r#"{"fiber":{"shape":{"kind":"flat_torus","dim":2,"scale0":1.0,"scale1":1.0}},"mass":{"kind":"constant","m0":0.5}}"#,
        )
        .unwrap();
        let rows = oracle_rows(&d.build().unwrap(), 20).unwrap();
        assert!(rows.iter().all(|r| r.abs_diff <= 1e-6));
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(WarpedDescriptor::from_json_str(
            r#"{"fiber":{"shape":{"kind":"sphere","rho0":1.0,"rho1":0.9}},"radius":3}"#
        )
        .is_err());
    }
}
