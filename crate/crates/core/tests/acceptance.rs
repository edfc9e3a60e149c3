//! End-to-end acceptance gate: runs the full battery twice and prints one
//! pass/fail line per criterion.

use spinstab_core::{run_suite, CheckRecord, Config, SuiteName, VerificationReport};

struct Gate<'a> {
    report: &'a VerificationReport,
    lines: Vec<(String, bool, String)>,
}

impl<'a> Gate<'a> {
    fn get(&self, id: &str) -> Result<&'a CheckRecord, String> {
        self.report.record(id).ok_or_else(|| format!("missing record {id}"))
    }

    fn matching(&self, prefix: &str) -> Vec<&'a CheckRecord> {
        self.report.records.iter().filter(|r| r.id.starts_with(prefix)).collect()
    }

    /// Every record under each prefix passes and at least one exists.
    fn all_pass(&self, prefixes: &[&str]) -> Result<(), String> {
        for p in prefixes {
            let rs = self.matching(p);
            if rs.is_empty() {
                return Err(format!("no records under {p}"));
            }
            if let Some(r) = rs.iter().find(|r| !r.pass) {
                return Err(format!("{} failed with {:.3e}", r.id, r.value));
            }
        }
        Ok(())
    }

    fn at_most(&self, id: &str, tol: f64) -> Result<(), String> {
        let r = self.get(id)?;
        if r.pass && r.value <= tol {
            Ok(())
        } else {
            Err(format!("{id} = {:.3e} exceeds {tol:.1e}", r.value))
        }
    }

    fn zero(&self, id: &str) -> Result<(), String> {
        self.at_most(id, 0.0)
    }

    /// Sum of the group times of records under `prefix`. Records of one
    /// group are adjacent and share their time stamp.
    fn group_time(&self, prefix: &str) -> f64 {
        let mut total = 0.0;
        let mut last = f64::NAN;
        for r in self.matching(prefix) {
            if r.wall_time != last {
                total += r.wall_time;
                last = r.wall_time;
            }
        }
        total
    }

    fn line(&mut self, name: &str, checks: Vec<Result<(), String>>) {
        let errors: Vec<String> = checks.into_iter().filter_map(|c| c.err()).collect();
        self.lines.push((name.to_string(), errors.is_empty(), errors.join("; ")));
    }
}

#[test]
fn acceptance() {
    let cfg = Config::default();
    let first = run_suite(SuiteName::All, &cfg);
    let second = run_suite(SuiteName::All, &cfg);
    let mut g = Gate { report: &first, lines: Vec::new() };

    let dims = [2, 3, 4, 7, 8];
    let mut c = Vec::new();
    for n in dims {
        c.push(g.zero(&format!("clifford.relations.n{n}")));
        c.push(g.zero(&format!("clifford.phi_isometry_exact.n{n}")));
        c.push(g.at_most(&format!("clifford.phi_isometry.n{n}"), 1e-13));
    }
    for n in [2, 3, 4] {
        c.push(g.at_most(&format!("torus.phi_nabla_commutation.n{n}"), 1e-10));
    }
    g.line("Clifford relations, isometry of Phi, Phi commutes with nabla", c);

    let mut c = vec![g.at_most("curvalg.bochner.first", 1e-10), g.at_most("curvalg.bochner.second", 1e-10)];
    for n in [4, 7] {
        c.push(g.at_most(&format!("torus.dirac_square.n{n}"), 1e-10));
    }
    g.line("Bochner identities and D*D Phi = Phi nabla*nabla", c);

    let mut c = Vec::new();
    for n in [4, 7] {
        c.push(g.at_most(&format!("torus.form_identity.n{n}"), 1e-10));
        c.push(g.all_pass(&[&format!("torus.rayleigh_min.n{n}")]));
        let expected = (n * (n + 1) / 2 - 1) as f64;
        c.push(match g.get(&format!("torus.kernel_dimension.n{n}")) {
            Ok(r) if r.value == expected => Ok(()),
            Ok(r) => Err(format!("kernel dimension {} for n = {n}", r.value)),
            Err(e) => Err(e),
        });
    }
    g.line("<Lh,h> = |D Phi(h)|^2, nonnegativity and flat kernel", c);

    let mut c = Vec::new();
    for op in ["ricci", "scalar", "laplacian"] {
        c.push(g.at_most(&format!("torus.linearization.{op}.error"), 1e-6));
        c.push(g.get(&format!("torus.linearization.{op}.order")).and_then(|r| {
            if r.value >= 1.9 {
                Ok(())
            } else {
                Err(format!("{op} order {:.3}", r.value))
            }
        }));
    }
    g.line("Linearization error and convergence order", c);

    let lambda_time = g.group_time("torus.lambda.");
    let c = vec![
        g.at_most("torus.lambda.first_variation", 1e-6),
        g.at_most("torus.lambda.second_variation.n3", 2e-2),
        g.at_most("torus.lambda.second_variation.n4", 2e-2),
        g.at_most("torus.lambda.lie_direction", 1e-8),
        g.at_most("torus.lambda.conformal_direction", 2e-2),
        if lambda_time <= 120.0 { Ok(()) } else { Err(format!("lambda checks took {lambda_time:.1} s")) },
    ];
    g.line("First and second variation of lambda", c);

    let c = vec![
        g.zero("torus.lambda.conformal_sign"),
        g.get("torus.lambda.conformal_sign.eligible").and_then(|r| {
            if r.value >= 20.0 {
                Ok(())
            } else {
                Err(format!("only {} eligible pairs", r.value))
            }
        }),
    ];
    g.line("Sign of lambda under conformal change", c);

    let g2_time = g.group_time("g2.");
    let c = vec![
        g.all_pass(&["g2.cross_table", "g2.identities", "g2.clifford", "g2.cubic", "g2.ranks", "g2.algebra", "g2.psi"]),
        g.at_most("g2.dph", 1e-11),
        g.at_most("g2.constrained.harmonicity", 1e-10),
        if g2_time <= 30.0 { Ok(()) } else { Err(format!("G2 battery took {g2_time:.1} s")) },
    ];
    g.line("G2 identities, type decomposition and Psi", c);

    let c = vec![
        g.zero("clifford.cy_model.m1.relations"),
        g.zero("clifford.cy_model.m2.relations"),
        g.at_most("torus.cy.dirac.m1", 1e-10),
        g.at_most("torus.cy.dirac.m2", 1e-10),
    ];
    g.line("Calabi-Yau Clifford model and Dirac operator", c);

    let c = vec![
        g.at_most("warped.oracle.product", 1.0),
        g.at_most("warped.oracle.schwarzschild", 1.0),
        g.at_most("warped.oracle.construction", 1.0),
        g.at_most("warped.ricci_trace", 1e-12),
    ];
    g.line("Warped scalar curvature against finite differences", c);

    let construction_time = g.group_time("warped.construction.") + g.group_time("warped.corollary.");
    let c = vec![
        g.all_pass(&["warped.construction.", "warped.corollary."]),
        g.at_most("warped.construction.m3", 1e-12),
        g.at_most("warped.construction.order", 0.05),
        g.zero("warped.construction.bound_scan"),
        g.zero("warped.construction.bound_random"),
        g.at_most("warped.construction.max_abs_a", 3.0),
        g.at_most("warped.construction.max_abs_b", 1.0),
        if construction_time <= 60.0 { Ok(()) } else { Err(format!("construction took {construction_time:.1} s")) },
    ];
    g.line("Negative-mass construction", c);

    let c = vec![g.zero("torus.cover.commutation"), g.zero("torus.cover.quadratic_ratio")];
    g.line("Finite covers", c);

    let c = vec![
        if first.without_timings() == second.without_timings() { Ok(()) } else { Err("reports differ".into()) },
        if first.wall_time <= 300.0 { Ok(()) } else { Err(format!("full battery took {:.1} s", first.wall_time)) },
        if first.pass { Ok(()) } else { Err(format!("{} records failed", first.failures().count())) },
    ];
    g.line("Determinism and runtime of the full battery", c);

    for (i, (name, ok, why)) in g.lines.iter().enumerate() {
        println!(
            "[{:>2}] {} {name}{}",
            i + 1,
            if *ok { "PASS" } else { "FAIL" },
            if why.is_empty() { String::new() } else { format!(" ({why})") }
        );
    }
    println!("full battery: {} records in {:.1} s", first.records.len(), first.wall_time);
    assert!(g.lines.iter().all(|l| l.1), "acceptance criteria failed");
}
