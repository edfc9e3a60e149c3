use nalgebra::DMatrix;
use proptest::prelude::*;
use spinstab_core::clifford::{build_gamma_rep, phi_map, SymTensor};
use spinstab_core::g2::structure::dot;
use spinstab_core::g2::G2Structure;
use spinstab_core::warped::{warped_ricci, warped_scalar, FiberFamily, MassProfile, Schedule, WarpedMetric};
use spinstab_core::{CheckRecord, Config, VerificationReport};

fn sym_from(n: usize, entries: &[f64]) -> SymTensor {
    SymTensor::symmetrize(&DMatrix::from_fn(n, n, |i, j| entries[i * n + j]))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn phi_is_an_isometry(n in prop::sample::select(vec![3usize, 4, 7]), entries in prop::collection::vec(-2.0f64..2.0, 49)) {
        let rep = build_gamma_rep(n).unwrap();
        let h = sym_from(n, &entries);
        let phi = phi_map(&h, &rep.default_spinor(), &rep).unwrap();
        let norm = h.inner(&h);
        prop_assert!((phi.norm_sqr() - norm).abs() <= 1e-13 * norm.max(1.0));
    }

    #[test]
    fn cross_product_norm_identity(x in prop::collection::vec(-5i64..=5, 7), y in prop::collection::vec(-5i64..=5, 7)) {
        let g = G2Structure::new().unwrap();
        let p = g.cross(&x, &y).to_vec();
        prop_assert_eq!(dot(&p, &p), dot(&x, &x) * dot(&y, &y) - dot(&x, &y).pow(2));
        prop_assert_eq!(dot(&p, &x), 0);
        prop_assert_eq!(dot(&p, &y), 0);
    }

    #[test]
    fn warped_ricci_trace_is_scalar(r in 1.2f64..60.0, y1 in 0.0f64..6.28, y2 in 0.0f64..6.28, m_inf in -1.0f64..0.3, c in -0.3f64..0.3) {
        let w = WarpedMetric::new(
            MassProfile::AsymptoticTail { m_inf, c },
            FiberFamily::conformal_torus(0.3, -0.2),
            Schedule::Linear { r2: 2.0, r3: 5.0 },
        );
        prop_assume!(2.0 * w.mass.m(r) < r);
        let s = warped_scalar(&w, r, &[y1, y2]).unwrap();
        let t = warped_ricci(&w, r, &[y1, y2]).unwrap().trace;
        prop_assert!((s - t).abs() <= 1e-12 * s.abs().max(1.0));
    }

    #[test]
    fn config_round_trips(seed in any::<u64>(), scale in 0.1f64..10.0, cutoff in 1usize..=8) {
        let cfg = Config { seed, tolerance_scale: scale, cutoff, ..Config::default() };
        let back = Config::from_json_str(&cfg.to_value().to_string()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn report_round_trips(values in prop::collection::vec(-1e300f64..1e300, 1..20)) {
        let mut report = VerificationReport::new("round_trip", 5, serde_json::json!({"seed": 5}));
        for (i, v) in values.iter().enumerate() {
            report.push(CheckRecord::at_most(format!("r{i}"), "anchor", *v, 1.0).with_time(0.25));
        }
        let back = VerificationReport::from_json_str(&report.to_json_string().unwrap()).unwrap();
        prop_assert_eq!(back, report);
    }
}
