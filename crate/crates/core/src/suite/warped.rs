use rand::Rng;

use super::Battery;
use crate::error::Error;
use crate::report::CheckRecord;
use crate::warped::construct::{bound_terms, LowerBound, COND_BOUND};
use crate::warped::{
    admissibility_check, construct_locsta, cor_infsta, fd_curvature_oracle, mass_and_order, positivity_scan,
    warped_ricci, warped_scalar, FdSteps, FiberFamily, MassProfile, ScanOptions, Schedule, WarpedMetric,
};

const SCALAR: &str = "The scalar curvature of $\\tilde{g}$ at $(r,p,q)$";
const ORACLE: &str = "This can be verified in local coordinates using Christoffel symbols";
const RII: &str = "-\\frac{m}{r} +m' +\\frac{2m}{r} -\\frac{r}{2}";
const CONSTRUCTION: &str = "there exists $m(r)$ with $m(0)=m'(0) =m''(0) =0$";
const HORIZON: &str = "m(r)< r/2, m(0)=m'(0) =m''(0) =0";
const M3: &str = "= -\\frac{1}{84}r_1^3 a_0";
const MASS: &str = "asymptotically flat of order $1$ with its mass $m(\\tilde{g})=m_{\\infty}$";
const BOUND: &str =
    "\\tilde{S} \\geq -S^{-}_M(g_s)+ \\frac{a_0}{4} \\frac{r_1^2}{r^2} (4 - A(r)) - \\frac{1}{(r_3-r_2)^2} B(r )";
const AB: &str = "|A(r)| \\leq 3 , \\ \\ \\ \\ |B(r)| \\leq 1";
const COND: &str = "(here we did not try to get the optimal constants)";
const HYPOTHESES: &str = "S_M(g_1) \\geq a_0>0,  \\ \\ \\ \\ S_M(g_0) \\geq 0";
const COROLLARY: &str = "If $g_s, \\ s \\in [0,1]$ is a one-parameter family";

/// Sphere family used for the construction certificate.
pub fn certificate_family() -> FiberFamily {
    FiberFamily::sphere(1.0, 0.999)
}

/// Steep sphere family that needs the corollary's reparametrization.
pub fn steep_family() -> FiberFamily {
    FiberFamily::sphere(1.0, 0.5)
}

/// Random fiber point inside the sampling chart of the family.
fn random_fiber_point(f: &FiberFamily, rng: &mut impl Rng) -> Vec<f64> {
    let qs = f.samples(64);
    let mut q = qs[rng.random_range(0..qs.len())].clone();
    for v in &mut q {
        *v += rng.random_range(-0.01..0.01);
    }
    q
}

struct OracleSummary {
    worst_ratio: f64,
    worst_diff: f64,
    trace: f64,
}

fn oracle_battery(w: &WarpedMetric, radii: &[f64], rng: &mut impl Rng) -> crate::Result<OracleSummary> {
    let mut out = OracleSummary { worst_ratio: 0.0, worst_diff: 0.0, trace: 0.0 };
    for &r in radii {
        let q = random_fiber_point(&w.fiber, rng);
        let exact = warped_scalar(w, r, &q)?;
        let est = fd_curvature_oracle(w, r, &q, FdSteps::default())?;
        let diff = (est.value - exact).abs();
        out.worst_diff = out.worst_diff.max(diff);
        out.worst_ratio = out.worst_ratio.max(diff / 1e-6f64.max(3.0 * est.error_bar));
        let ric = warped_ricci(w, r, &q)?;
        out.trace = out.trace.max((ric.trace - exact).abs() / exact.abs().max(1.0));
    }
    Ok(out)
}

/// Radii drawn uniformly from `[lo, hi]`, kept away from the breakpoints of
/// `w` by more than the oracle's exclusion zone.
fn oracle_radii(w: &WarpedMetric, lo: f64, hi: f64, count: usize, rng: &mut impl Rng) -> Vec<f64> {
    let breaks = w.breakpoints();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let r: f64 = rng.random_range(lo..hi);
        if breaks.iter().all(|b| (r - b).abs() > 20.0 * FdSteps::default().base * r) {
            out.push(r);
        }
    }
    out
}

pub(super) fn run(b: &mut Battery) {
    let count = b.cfg.samples.warped_oracle;
    let mut rng = b.seed(1100);

    let construction = construct_locsta(&certificate_family());

    let mut cases: Vec<(&str, crate::Result<(WarpedMetric, Vec<f64>)>)> = Vec::new();
    {
        let w = WarpedMetric::product(FiberFamily::conformal_torus(0.3, -0.2), 0.4);
        let radii = oracle_radii(&w, 1.0, 50.0, count, &mut rng);
        cases.push(("product", Ok((w, radii))));
        let w = WarpedMetric::new(
            MassProfile::Constant { m0: 0.5 },
            FiberFamily::flat_torus(2, 1.0, 1.0),
            Schedule::Constant { s: 0.0 },
        );
        let radii = oracle_radii(&w, 1.5, 40.0, count, &mut rng);
        cases.push(("schwarzschild", Ok((w, radii))));
        match &construction {
            Ok(c) => {
                let p = c.profile();
                let w = c.metric.clone();
                let mut radii = oracle_radii(&w, 1.0, 2.0 * p.r3, count - count / 2, &mut rng);
                radii.extend(oracle_radii(&w, p.r2, p.r3, count / 2, &mut rng));
                cases.push(("construction", Ok((w, radii))));
            }
            Err(e) => cases.push(("construction", Err(Error::Precondition(e.to_string())))),
        }
    }
    let mut trace: f64 = 0.0;
    let mut evaluated = 0;
    let total = cases.len();
    for (name, case) in cases {
        let id = format!("oracle.{name}");
        b.run(&id.clone(), ORACLE, |cfg| {
            let (w, radii) = case?;
            let s = oracle_battery(&w, &radii, &mut rng)?;
            trace = trace.max(s.trace);
            evaluated += 1;
            Ok(vec![CheckRecord::at_most(id, ORACLE, s.worst_ratio, cfg.tolerance_scale).with_detail(format!(
                "{} samples; value is max |formula - FD| / max(1e-6, 3 error bar); max |formula - FD| = {:.3e}",
                radii.len(),
                s.worst_diff
            ))])
        });
    }
    b.run("ricci_trace", RII, |cfg| {
        if evaluated != total {
            return Err(Error::Precondition("an oracle battery failed to evaluate".into()));
        }
        Ok(vec![CheckRecord::at_most("ricci_trace", RII, trace, cfg.tol(1e-12))])
    });

    b.run("scan_product", SCALAR, |cfg| {
        let f = certificate_family();
        let w = WarpedMetric::product(f.clone(), 0.25);
        let scan = positivity_scan(&w, None, ScanOptions { radial: 200, ..ScanOptions::default() })?;
        let qs = f.samples(ScanOptions::default().fiber);
        let worst = scan.samples.iter().map(|s| (s.s_tilde - f.scalar(0.25, &qs[s.q_index])).abs()).fold(0.0, f64::max);
        Ok(vec![CheckRecord::at_most("scan_product", SCALAR, worst, cfg.tol(1e-12))])
    });

    let bound_samples = b.cfg.samples.bound_samples;
    b.run("construction", CONSTRUCTION, |cfg| {
        let c = construction.map_err(|e| Error::Precondition(e.to_string()))?;
        let p = c.profile().clone();
        let r1 = p.r1;
        let m3_expected = -r1.powi(3) * p.a0 / 84.0;
        let m_inf_expected = -r1.powi(3) * p.a0 / 168.0;
        let mo = mass_and_order(&c.metric)?;
        let order = mo.order.map(|o| (o - 1.0).abs()).unwrap_or(f64::INFINITY);
        let f = certificate_family();
        let bound = LowerBound::new(&f, &c.metric, c.admissibility.clone())?;
        let mut below = 0;
        for _ in 0..bound_samples {
            let r = rng.random_range(p.r2..p.r3);
            let q = random_fiber_point(&f, &mut rng);
            let s = warped_scalar(&c.metric, r, &q)?;
            let lb = bound.at(r).map(|v| v.value).unwrap_or(f64::NEG_INFINITY);
            below += usize::from(lb > s + 1e-12 * s.abs().max(1.0));
        }
        let echo = format!("a0 = {:.16e}, r1 = {r1}, r2 = {}, r3 = {:.16e}", p.a0, p.r2, p.r3);
        Ok(vec![
            CheckRecord::at_least("construction.scan_min", CONSTRUCTION, c.scan.min_s_tilde, -cfg.tol(1e-9))
                .with_detail(format!("{} samples; {echo}", c.scan.samples.len())),
            CheckRecord::at_most("construction.horizon", HORIZON, c.scan.max_horizon_gap, 0.0)
                .with_detail("max of 2m(r) - r over the scan"),
            CheckRecord::at_least("construction.transition", CONSTRUCTION, c.transition_margin, -cfg.tol(1e-9)),
            CheckRecord::at_most(
                "construction.m3",
                M3,
                ((p.eval(p.r3).m - m3_expected) / m3_expected).abs(),
                cfg.tol(1e-12),
            ),
            CheckRecord::equal("construction.mass", MASS, mo.mass, m_inf_expected).with_detail(echo),
            CheckRecord::at_most("construction.order", MASS, order, 0.05)
                .with_detail(format!("fitted order {:.6}", mo.order.unwrap_or(f64::NAN))),
            CheckRecord::exact("construction.bound_scan", BOUND, c.scan.bound_violations),
            CheckRecord::exact("construction.bound_random", BOUND, below)
                .with_detail(format!("{bound_samples} random samples")),
            CheckRecord::at_most("construction.max_abs_a", AB, c.scan.max_abs_a, 3.0),
            CheckRecord::at_most("construction.max_abs_b", AB, c.scan.max_abs_b, 1.0),
        ])
    });

    b.run("bound.boundary_constants", AB, |_| {
        let (mut a_max, mut b_max): (f64, f64) = (0.0, 0.0);
        for r1 in [7.0, 20.0, 90.0] {
            let r2 = r1 + 1.0;
            let r3 = r2 + r1 / 7.0;
            for i in 0..=400 {
                let r = r2 + (r3 - r2) * i as f64 / 400.0;
                let (a, bb) = bound_terms(COND_BOUND, COND_BOUND, COND_BOUND, r, r1, r2, r3);
                a_max = a_max.max(a.abs());
                b_max = b_max.max(bb.abs());
            }
        }
        Ok(vec![
            CheckRecord::at_most("bound.boundary_a", AB, a_max, 3.0).with_detail("C1 = C2 = C3 = 1/200"),
            CheckRecord::at_most("bound.boundary_b", AB, b_max, 1.0).with_detail("C1 = C2 = C3 = 1/200"),
        ])
    });

    b.run("admissibility", COND, |_| {
        let steep = admissibility_check(&steep_family());
        let named = !steep.passed && steep.violations.iter().any(|v| v.starts_with("C2"));
        let flat = admissibility_check(&FiberFamily::flat_torus(2, 1.0, 1.0));
        let rejected = !flat.passed && flat.violations.iter().any(|v| v.starts_with("a0"));
        let inadmissible = matches!(construct_locsta(&steep_family()), Err(Error::Inadmissible(_)));
        Ok(vec![
            CheckRecord::exact("admissibility.steep_named", COND, usize::from(!named)),
            CheckRecord::exact("admissibility.flat_rejected", HYPOTHESES, usize::from(!rejected)),
            CheckRecord::exact("admissibility.builder_refuses", COND, usize::from(!inadmissible)),
        ])
    });

    b.run("corollary", COROLLARY, |cfg| {
        let res = cor_infsta(&steep_family())?;
        let adm = &res.construction.admissibility;
        let cond = [adm.c1, adm.c2, adm.c3].iter().filter(|&&c| c > COND_BOUND).count();
        Ok(vec![
            CheckRecord::info("corollary.eps", COROLLARY, res.eps)
                .with_detail(format!("{} admissibility probes", res.trace.len())),
            CheckRecord::exact("corollary.admissible", COND, cond),
            CheckRecord::at_least("corollary.scan_min", COROLLARY, res.construction.scan.min_s_tilde, -cfg.tol(1e-9)),
            CheckRecord::at_most("corollary.horizon", HORIZON, res.construction.scan.max_horizon_gap, 0.0),
        ])
    });
}
