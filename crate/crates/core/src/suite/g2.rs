use num_rational::Rational64;

use super::Battery;
use crate::g2::decomp::traceless_basis;
use crate::g2::field::constrained_g2_fields;
use crate::g2::forms::DIM;
use crate::g2::structure::{basis, dot};
use crate::g2::{
    clifford_relation_violations, cross_identities, cubic_pairing_violations, dirac_phi_agreement, harmonic_chain,
    harmonicity_residual, in_lambda27, psi, psi_matrix, rank, Form, G2Structure, Projectors,
};
use crate::report::CheckRecord;
use crate::torus::FourierSymTensor;

const PHI: &str = "e^{123}+e^{145}+e^{167}+e^{246}-e^{257}-e^{347}-e^{356}";
const CROSS: &str = "\\langle P(X,Y),Z\\rangle=\\phi(X,Y,Z)";
const IDENTITIES: &str = "The cross product has many wonderful properties";
const CLIFFORD: &str = "X\\cdot(a,Y)=(-\\langle X,Y\\rangle, aX+P(X,Y))";
const CUBIC: &str = "\\phi(X,Y,Z)=-\\langle X\\cdot Y\\cdot Z\\cdot \\sigma_0,\\sigma_0\\rangle";
const TYPES: &str = "\\wedge^3(M)=\\wedge^3_1(M)\\oplus\\wedge^3_7(M)\\oplus \\wedge^3_{27}(M)";
const PSI: &str = "\\Psi(h)=h_{ij}e^i\\wedge(e_j\\lrcorner\\phi)";
const DPH: &str = "=(\\delta h,-h_{ij,k}P(e_i,e_k)\\otimes e^j)";

pub(super) fn run(b: &mut Battery) {
    let g = match G2Structure::new() {
        Ok(g) => g,
        Err(e) => {
            b.run("structure", PHI, |_| Err(e));
            return;
        }
    };

    b.run("cross_table", CROSS, |_| {
        let mut bad = 0;
        for i in 0..DIM {
            for j in 0..DIM {
                let p: Vec<i64> = g.cross(&basis::<i64>(i), &basis::<i64>(j)).to_vec();
                for k in 0..DIM {
                    bad += usize::from(dot(&p, &basis::<i64>(k)) != g.phi_ijk(i, j, k));
                }
            }
        }
        Ok(vec![CheckRecord::exact("cross_table", CROSS, bad)])
    });

    let samples = b.cfg.samples.g2_rational;
    let mut rng = b.seed(1000);
    b.run("identities", IDENTITIES, |_| {
        let r = cross_identities(&g, samples, &mut rng);
        let detail = |i: usize| format!("{} cases", r.cases[i]);
        Ok(vec![
            CheckRecord::exact("identities.antisymmetry", IDENTITIES, r.antisymmetry).with_detail(detail(0)),
            CheckRecord::exact("identities.norm", IDENTITIES, r.norm_identity).with_detail(detail(1)),
            CheckRecord::exact("identities.double_cross", IDENTITIES, r.double_cross).with_detail(detail(2)),
            CheckRecord::exact("identities.contraction", IDENTITIES, r.contraction).with_detail(detail(3)),
        ])
    });

    b.run("clifford", CLIFFORD, |_| {
        let (bad, cases) = clifford_relation_violations(&g, samples, &mut rng);
        Ok(vec![CheckRecord::exact("clifford", CLIFFORD, bad).with_detail(format!("{cases} cases"))])
    });

    b.run("cubic", CUBIC, |_| Ok(vec![CheckRecord::exact("cubic", CUBIC, cubic_pairing_violations(&g))]));

    b.run("ranks", TYPES, |_| {
        let p = Projectors::new(&g);
        let (r1, r7, r27) = p.ranks();
        Ok(vec![
            CheckRecord::equal("ranks.1", TYPES, r1 as f64, 1.0),
            CheckRecord::equal("ranks.7", TYPES, r7 as f64, 7.0),
            CheckRecord::equal("ranks.27", TYPES, r27 as f64, 27.0),
            CheckRecord::exact("algebra", TYPES, p.algebra_violations()),
        ])
    });

    b.run("psi", PSI, |_| {
        let zero = Rational64::from_integer(0);
        let mut id = [[zero; DIM]; DIM];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = Rational64::from_integer(1);
        }
        let phi: Form<Rational64> = g.phi_as();
        let identity = usize::from(psi(&g, &id) != phi.scale(Rational64::from_integer(3)));
        let outside = traceless_basis().iter().filter(|h| !in_lambda27(&g, &psi(&g, h))).count();
        Ok(vec![
            CheckRecord::exact("psi_identity", PSI, identity),
            CheckRecord::exact("psi_lambda27", PSI, outside),
            CheckRecord::equal("psi_rank", PSI, rank(&psi_matrix(&g)) as f64, 27.0),
        ])
    });

    let fields = b.cfg.samples.g2_fields;
    let cutoff = b.cfg.cutoff_n7;
    b.run("dph", DPH, |cfg| {
        let (mut agreement, mut chain): (f64, f64) = (0.0, 0.0);
        for _ in 0..fields {
            let h = FourierSymTensor::random(DIM, cutoff, 6, 1.0, &mut rng);
            agreement = agreement.max(dirac_phi_agreement(&g, &h)?);
            let c = harmonic_chain(&g, &h)?;
            chain = chain.max(c.codifferential).max(c.star_d).max(c.cross_step);
        }
        Ok(vec![
            CheckRecord::at_most("dph", DPH, agreement, cfg.tol(1e-11)),
            CheckRecord::at_most("chain", PSI, chain, cfg.tol(1e-11)),
        ])
    });

    b.run("constrained", PSI, |cfg| {
        let fields = constrained_g2_fields(&g, cutoff)?;
        let mut worst: f64 = 0.0;
        for f in &fields {
            worst = worst.max(harmonicity_residual(&g, f)?);
        }
        Ok(vec![
            CheckRecord::at_most("constrained.harmonicity", PSI, worst, cfg.tol(1e-10)),
            CheckRecord::info("constrained.dimension", PSI, fields.len() as f64),
        ])
    });
}
