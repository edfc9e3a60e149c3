use spinstab_core::{run_suite, Config, SuiteName};

fn passes(name: SuiteName, seed: u64) {
    let cfg = Config { seed, ..Config::default() };
    let report = run_suite(name, &cfg);
    let failed: Vec<_> = report.failures().map(|r| format!("{} = {:e}", r.id, r.value)).collect();
    assert!(report.pass, "{name} failed at seed {seed}: {failed:?}");
    assert!(report.records.iter().all(|r| !r.anchor.is_empty()));
    assert_eq!(report.config["seed"], seed);
}

#[test]
fn clifford_other_seed() {
    passes(SuiteName::Clifford, 12345);
}

#[test]
fn curvalg_other_seed() {
    passes(SuiteName::Curvalg, 12345);
}

#[test]
fn g2_other_seed() {
    passes(SuiteName::G2, 12345);
}

#[test]
fn warped_other_seed() {
    passes(SuiteName::Warped, 12345);
}

#[test]
fn seed_changes_sampled_values() {
    let a = run_suite(SuiteName::Curvalg, &Config { seed: 1, ..Config::default() });
    let b = run_suite(SuiteName::Curvalg, &Config { seed: 2, ..Config::default() });
    assert_ne!(a.record("k3_generic_spinor").unwrap().value, b.record("k3_generic_spinor").unwrap().value);
}

#[test]
fn tolerance_scale_is_applied() {
    let cfg = Config { tolerance_scale: 10.0, ..Config::default() };
    let r = run_suite(SuiteName::Curvalg, &cfg);
    assert_eq!(r.record("bochner.first").unwrap().tolerance, 1e-9);
}
