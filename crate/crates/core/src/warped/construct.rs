//! Admissibility of fiber families, the negative-mass construction, its
//! positivity scan and the asymptotic mass.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fiber::{family_bounds, FiberFamily};
use super::mass::{ConstructionProfile, MassProfile, Schedule};
use super::metric::{warped_scalar, WarpedMetric};
use crate::error::{Error, Result};

/// Bound on `C1`, `C2` and `C3`.
pub const COND_BOUND: f64 = 1.0 / 200.0;
pub const S_SAMPLES: usize = 201;
pub const FIBER_SAMPLES: usize = 12;
pub const EPS_FLOOR: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    /// `max |∂_s g_αβ ∂_s g^{αβ}|`.
    pub c1: f64,
    /// `max |g^{αβ} ∂_s g_αβ|`.
    pub c2: f64,
    /// `max |∂_s (g^{αβ} ∂_s g_αβ)|`.
    pub c3: f64,
    /// `min S_M(g_1)` over the fiber samples.
    pub a0: f64,
    /// `max_s max(0, −S_M(g_s))`.
    pub s_minus: f64,
    /// `min S_M(g_0)`.
    pub s0_min: f64,
    pub passed: bool,
    pub violations: Vec<String>,
}

pub fn admissibility_check(f: &FiberFamily) -> AdmissibilityReport {
    let qs = f.samples(FIBER_SAMPLES);
    let (mut c1, mut c2, mut c3, mut s_minus) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..S_SAMPLES {
        let s = i as f64 / (S_SAMPLES - 1) as f64;
        for q in &qs {
            let (a, b, c) = family_bounds(f, s, q);
            c1 = c1.max(a);
            c2 = c2.max(b);
            c3 = c3.max(c);
            s_minus = s_minus.max(-f.scalar(s, q));
        }
    }
    let a0 = qs.iter().map(|q| f.scalar(1.0, q)).fold(f64::INFINITY, f64::min);
    let s0_min = qs.iter().map(|q| f.scalar(0.0, q)).fold(f64::INFINITY, f64::min);
    let mut violations = Vec::new();
    for (name, v) in [("C1", c1), ("C2", c2), ("C3", c3)] {
        if !(v <= COND_BOUND) {
            violations.push(format!("{name} = {v:.6e} exceeds 1/200"));
        }
    }
    if !(a0 > 0.0) {
        violations.push(format!("a0 = S(g_1) = {a0:.6e} is not positive"));
    }
    if !(s0_min >= 0.0) {
        violations.push(format!("S(g_0) = {s0_min:.6e} is negative"));
    }
    if a0 > 0.0 && s_minus > a0 / 10.0 {
        violations.push(format!("S- = {s_minus:.6e} exceeds a0/10 = {:.6e}", a0 / 10.0));
    }
    AdmissibilityReport { c1, c2, c3, a0, s_minus, s0_min, passed: violations.is_empty(), violations }
}

/// `A(r)` and `B(r)` of the lower bound on `[r2, r3]`.
pub fn bound_terms(c1: f64, c2: f64, c3: f64, r: f64, r1: f64, r2: f64, r3: f64) -> (f64, f64) {
    let w = r3 - r2;
    let tilt = (-r1 + 3.0 * (r - r2)).abs();
    let a = c2 * r / w + (5.0 * c2 / 3.0 + (4.0 * c3 + c1 + c2 * c2) / 6.0 * r / w) * tilt / w;
    let b = (c1 + 4.0 * c3 + c2 * c2) / 4.0 + 2.0 * c2 * w / r;
    (a, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub a: f64,
    pub b: f64,
    pub value: f64,
}

/// `−S⁻_M(g_s) + (a0/4)(r1²/r²)(4 − A(r)) − B(r)/(r3 − r2)²`.
#[derive(Clone, Debug)]
pub struct LowerBound {
    profile: ConstructionProfile,
    report: AdmissibilityReport,
    fiber: FiberFamily,
    schedule: Schedule,
    qs: Vec<Vec<f64>>,
}

impl LowerBound {
    pub fn new(f: &FiberFamily, w: &WarpedMetric, report: AdmissibilityReport) -> Result<Self> {
        let MassProfile::Construction(profile) = &w.mass else {
            return Err(Error::Precondition("lower bound needs a constructed mass profile".into()));
        };
        Ok(Self {
            profile: profile.clone(),
            report,
            fiber: f.clone(),
            schedule: w.schedule.clone(),
            qs: f.samples(FIBER_SAMPLES),
        })
    }

    /// `None` outside `[r2, r3]`.
    pub fn at(&self, r: f64) -> Option<BoundValue> {
        let p = &self.profile;
        if r < p.r2 || r > p.r3 {
            return None;
        }
        let c = &self.report;
        let (a, b) = bound_terms(c.c1, c.c2, c.c3, r, p.r1, p.r2, p.r3);
        let s = self.schedule.eval(r).s;
        let s_minus = self.qs.iter().map(|q| (-self.fiber.scalar(s, q)).max(0.0)).fold(0.0, f64::max);
        let w = p.r3 - p.r2;
        let value = -s_minus + p.a0 / 4.0 * (p.r1 * p.r1) / (r * r) * (4.0 - a) - b / (w * w);
        Some(BoundValue { a, b, value })
    }
}

pub fn scalar_lower_bound(f: &FiberFamily, w: &WarpedMetric, r: f64) -> Result<Option<BoundValue>> {
    Ok(LowerBound::new(f, w, admissibility_check(f))?.at(r))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSample {
    pub r: f64,
    pub q_index: usize,
    pub s_tilde: f64,
    pub lower_bound: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub radial: usize,
    pub fiber: usize,
    pub tolerance: f64,
    /// Scan `(0, extent·r3]`.
    pub extent: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { radial: 4000, fiber: 8, tolerance: 1e-9, extent: 4.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub samples: Vec<ScanSample>,
    pub min_s_tilde: f64,
    pub min_at: (f64, usize),
    /// `max (2m(r) − r)`; negative when the horizon condition holds.
    pub max_horizon_gap: f64,
    pub bound_violations: usize,
    pub max_abs_a: f64,
    pub max_abs_b: f64,
    pub passed: bool,
}

impl ScanResult {
    /// CSV with header `r,q_index,s_tilde,lower_bound`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,q_index,s_tilde,lower_bound\n");
        for s in &self.samples {
            let lb = s.lower_bound.map(|v| format!("{v:.16e}")).unwrap_or_default();
            out.push_str(&format!("{:.16e},{},{:.16e},{}\n", s.r, s.q_index, s.s_tilde, lb));
        }
        out
    }
}

fn scan_radii(w: &WarpedMetric, outer: f64, radial: usize) -> Vec<f64> {
    let mut radii: Vec<f64> = (1..=radial).map(|i| outer * i as f64 / radial as f64).collect();
    for b in w.breakpoints() {
        radii.extend([b * (1.0 - 1e-9), b, b * (1.0 + 1e-9)]);
    }
    if let Schedule::Linear { r2, r3 } = w.schedule {
        radii.extend((0..=400).map(|i| r2 + (r3 - r2) * i as f64 / 400.0));
    }
    radii.retain(|&r| r > 0.0 && r <= outer);
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    radii
}

/// Scans `S̃` over the radial grid and fiber samples, together with the
/// horizon condition and, when available, the lower bound.
pub fn positivity_scan(w: &WarpedMetric, bound: Option<&LowerBound>, opts: ScanOptions) -> Result<ScanResult> {
    let outer = opts.extent * w.schedule.settles_at().max(w.breakpoints().last().copied().unwrap_or(1.0));
    let radii = scan_radii(w, outer, opts.radial);
    let qs = w.fiber.samples(opts.fiber);
    let rows: Vec<Result<(Vec<ScanSample>, f64, Option<BoundValue>)>> = radii
        .par_iter()
        .map(|&r| {
            let gap = 2.0 * w.mass.m(r) - r;
            let b = bound.and_then(|lb| lb.at(r));
            let mut out = Vec::with_capacity(qs.len());
            for (qi, q) in qs.iter().enumerate() {
                out.push(ScanSample {
                    r,
                    q_index: qi,
                    s_tilde: warped_scalar(w, r, q)?,
                    lower_bound: b.map(|v| v.value),
                });
            }
            Ok((out, gap, b))
        })
        .collect();
    let mut samples = Vec::with_capacity(radii.len() * qs.len());
    let (mut min_s, mut min_at) = (f64::INFINITY, (0.0, 0));
    let (mut max_gap, mut violations, mut max_a, mut max_b) = (f64::NEG_INFINITY, 0, 0.0f64, 0.0f64);
    for row in rows {
        let (row, gap, b) = row?;
        max_gap = max_gap.max(gap);
        if let Some(b) = b {
            max_a = max_a.max(b.a.abs());
            max_b = max_b.max(b.b.abs());
        }
        for s in row {
            if s.s_tilde < min_s {
                min_s = s.s_tilde;
                min_at = (s.r, s.q_index);
            }
            if let Some(lb) = s.lower_bound {
                if lb > s.s_tilde + 1e-12 * s.s_tilde.abs().max(1.0) {
                    violations += 1;
                }
            }
            samples.push(s);
        }
    }
    let passed = min_s >= -opts.tolerance && max_gap < 0.0;
    Ok(ScanResult {
        samples,
        min_s_tilde: min_s,
        min_at,
        max_horizon_gap: max_gap,
        bound_violations: violations,
        max_abs_a: max_a,
        max_abs_b: max_b,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub metric: WarpedMetric,
    pub admissibility: AdmissibilityReport,
    /// `min (m'(r) + (a0/4) r²)` on the transition interval.
    pub transition_margin: f64,
    pub scan: ScanResult,
}

impl Construction {
    pub fn profile(&self) -> &ConstructionProfile {
        match &self.metric.mass {
            MassProfile::Construction(p) => p,
            _ => unreachable!("constructions always carry their profile"),
        }
    }
}

pub fn construct_locsta(f: &FiberFamily) -> Result<Construction> {
    construct_locsta_with(f, ScanOptions::default())
}

pub fn construct_locsta_with(f: &FiberFamily, opts: ScanOptions) -> Result<Construction> {
    f.validate()?;
    let report = admissibility_check(f);
    if !report.passed {
        return Err(Error::Inadmissible(report.violations.join("; ")));
    }
    let profile = ConstructionProfile::new(report.a0);
    let transition_margin = (0..=1000)
        .map(|i| {
            let r = profile.r1 + (profile.r2 - profile.r1) * i as f64 / 1000.0;
            profile.eval(r).dm + profile.a0 / 4.0 * r * r
        })
        .fold(f64::INFINITY, f64::min);
    if transition_margin < -1e-9 * profile.a0 * profile.r1 * profile.r1 {
        return Err(Error::Precondition(format!(
            "transition segment violates m' >= -(a0/4) r^2 by {transition_margin:e}"
        )));
    }
    let metric = WarpedMetric::new(
        MassProfile::Construction(profile.clone()),
        f.clone(),
        Schedule::Linear { r2: profile.r2, r3: profile.r3 },
    );
    let bound = LowerBound::new(f, &metric, report.clone())?;
    let scan = positivity_scan(&metric, Some(&bound), opts)?;
    if scan.max_horizon_gap >= 0.0 {
        return Err(Error::Horizon { r: f64::NAN, two_m: scan.max_horizon_gap });
    }
    if scan.min_s_tilde < -opts.tolerance {
        return Err(Error::PositivityScan { r: scan.min_at.0, q: scan.min_at.1, value: scan.min_s_tilde });
    }
    Ok(Construction { metric, admissibility: report, transition_margin, scan })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassOrder {
    pub mass: f64,
    /// `None` when the deviation from the product metric vanishes.
    pub order: Option<f64>,
    pub radii: Vec<f64>,
    pub deviations: Vec<f64>,
}

/// Mass `m_∞` and the decay exponent of `|g̃ − g_product|`, fitted by least
/// squares in log-log coordinates over dyadic radii beyond the point where
/// the fiber metric settles.
pub fn mass_and_order(w: &WarpedMetric) -> Result<MassOrder> {
    let start = (4.0 * w.schedule.settles_at()).max(4.0 * w.breakpoints().last().copied().unwrap_or(0.0)).max(16.0);
    let radii: Vec<f64> = (8..=20).map(|j| start * 2f64.powi(j)).collect();
    let limit = w.mass.limit();
    let first = (w.mass.m(radii[0]) - limit).abs();
    let last = (w.mass.m(radii[radii.len() - 1]) - limit).abs();
    if !(last <= first) || !limit.is_finite() {
        return Err(Error::NonConvergentProfile);
    }
    let mut deviations = Vec::with_capacity(radii.len());
    for &r in &radii {
        let m = w.mass.m(r);
        if 2.0 * m >= r {
            return Err(Error::Horizon { r, two_m: 2.0 * m });
        }
        deviations.push((2.0 * m / (r - 2.0 * m)).abs());
    }
    let order = if deviations.iter().all(|&d| d == 0.0) {
        None
    } else {
        let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
        let ys: Vec<f64> = deviations.iter().map(|d| d.ln()).collect();
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        Some(-sxy / sxx)
    };
    Ok(MassOrder { mass: limit, order, radii, deviations })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonStep {
    pub eps: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfstaResult {
    pub eps: f64,
    pub trace: Vec<EpsilonStep>,
    pub construction: Construction,
}

/// Shrinks the family to `s ↦ g_{εs}` until it is admissible, then runs the
/// construction. `ε` is halved until admissible and then refined by
/// bisection against the last inadmissible value.
pub fn cor_infsta(f: &FiberFamily) -> Result<InfstaResult> {
    cor_infsta_with(f, ScanOptions::default())
}

pub fn cor_infsta_with(f: &FiberFamily, opts: ScanOptions) -> Result<InfstaResult> {
    f.validate()?;
    let qs = f.samples(FIBER_SAMPLES);
    if qs.iter().any(|q| f.scalar(0.0, q) < 0.0) {
        return Err(Error::Precondition("S(g_0) must be nonnegative".into()));
    }
    for i in 1..S_SAMPLES {
        let s = i as f64 / (S_SAMPLES - 1) as f64;
        if let Some(q) = qs.iter().find(|q| !(f.scalar(s, q) > 0.0)) {
            return Err(Error::Precondition(format!(
                "S(g_s) must be positive for s in (0,1]; fails at s = {s}, q = {q:?}"
            )));
        }
    }
    let mut trace = Vec::new();
    let mut check = |eps: f64| {
        let passed = admissibility_check(&f.restricted(eps)).passed;
        trace.push(EpsilonStep { eps, passed });
        passed
    };
    let mut eps = 1.0;
    let mut failed = None;
    while !check(eps) {
        failed = Some(eps);
        eps /= 2.0;
        if eps < EPS_FLOOR {
            return Err(Error::NoAdmissibleEpsilon { floor: EPS_FLOOR });
        }
    }
    if let Some(mut hi) = failed {
        let mut lo = eps;
        while hi / lo > 1.01 {
            let mid = 0.5 * (lo + hi);
            if check(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        eps = lo;
    }
    let construction = construct_locsta_with(&f.restricted(eps), opts)?;
    Ok(InfstaResult { eps, trace, construction })
}
