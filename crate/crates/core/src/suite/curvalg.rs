use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use super::clifford::random_sym;
use super::Battery;
use crate::clifford::{Spinor, SymTensor};
use crate::curvalg::{bochner_curvature_identity, k3_sample, max_spinor_action, validate_curvature, AlgCurvature};
use crate::report::CheckRecord;

const CONVENTION: &str = "R_{XY}=-\\grd_X\\grd_Y+\\grd_Y\\grd_X+\\grd_{[X,Y]}";
const RING: &str = "(\\overset{\\hspace{.5ex}\\circ}{R} h)_{ij}=R_{ikjl}h_{kl}";
const KERNEL: &str = "R_{klij}e_ie_j\\cdot \\sigma_0=0";
const SPIN_ACTION: &str = "R_{XY}\\sigma=\\frac{1}{4}R(X,Y,e_i,e_j)e_ie_j\\cdot \\sigma";
const BOCHNER: &str = "the following Bochner type formula";

fn idx(n: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * n + j) * n + k) * n + l
}

/// `(R̊h)_ij = Σ R_ikjl h_kl` by direct summation over the flat component array.
fn ring_oracle(r: &AlgCurvature, h: &SymTensor) -> DMatrix<f64> {
    let n = r.n();
    let a = r.as_slice();
    DMatrix::from_fn(n, n, |i, j| {
        let mut acc = 0.0;
        for k in 0..n {
            for l in 0..n {
                acc += a[idx(n, i, k, j, l)] * h.get(k, l);
            }
        }
        acc
    })
}

pub(super) fn run(b: &mut Battery) {
    b.run("zero_valid", CONVENTION, |_| {
        let r = validate_curvature(4, vec![0.0; 256])?;
        Ok(vec![CheckRecord::exact("zero_valid", CONVENTION, usize::from(!r.is_ricci_flat() || r.scalar() != 0.0))])
    });

    b.run("sphere_ricci", CONVENTION, |_| {
        let mut out = Vec::new();
        for n in 2..=4 {
            let c = AlgCurvature::constant_curvature(n, 1.0);
            let r = validate_curvature(n, c.as_slice().to_vec())?;
            let expected = DMatrix::<f64>::identity(n, n) * (n as f64 - 1.0);
            out.push(CheckRecord::at_most(
                format!("sphere_ricci.n{n}"),
                CONVENTION,
                (r.ricci() - expected).amax(),
                0.0,
            ));
            out.push(CheckRecord::equal(format!("sphere_scalar.n{n}"), CONVENTION, r.scalar(), (n * (n - 1)) as f64));
        }
        Ok(out)
    });

    b.run("sign_error_rejected", CONVENTION, |_| {
        let mut r = AlgCurvature::constant_curvature(2, 1.0).as_slice().to_vec();
        r[idx(2, 0, 1, 1, 0)] = 1.0;
        let named = match validate_curvature(2, r) {
            Err(e) => e.to_string().contains("R_ijkl = -R_ijlk"),
            Ok(_) => false,
        };
        Ok(vec![CheckRecord::exact("sign_error_rejected", CONVENTION, usize::from(!named))])
    });

    b.run("ring_h_identity", RING, |_| {
        let r = AlgCurvature::constant_curvature(4, 0.5);
        let out = r.ring_h(&SymTensor::identity(4))?;
        let zero = AlgCurvature::zero(3).ring_h(&SymTensor::identity(3))?;
        Ok(vec![
            CheckRecord::at_most("ring_h_identity", RING, (out.matrix() - r.ricci()).amax(), 1e-15),
            CheckRecord::equal("ring_h_zero", RING, zero.matrix().amax(), 0.0),
        ])
    });

    let count = b.cfg.samples.bochner_curvatures;
    let tensors = b.cfg.samples.bochner_tensors;
    let mut rng = b.seed(500);
    let seeds: Vec<u64> = (0..count).map(|_| rng.random()).collect();

    b.run("ring_h_oracle", RING, |cfg| {
        let mut worst: f64 = 0.0;
        for &s in &seeds {
            let c = k3_sample(s)?;
            let h = random_sym(4, &mut rng);
            worst = worst.max((c.curvature().ring_h(&h)?.matrix() - ring_oracle(c.curvature(), &h)).amax());
        }
        Ok(vec![CheckRecord::at_most("ring_h_oracle", RING, worst, cfg.tol(1e-13))])
    });

    b.run("k3", KERNEL, |cfg| {
        let mut bad_dim = 0;
        let (mut residual, mut ricci, mut generic): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
        for &s in &seeds {
            let c = k3_sample(s)?;
            bad_dim += usize::from(c.curvature().spinor_kernel(c.rep()).len() != 2);
            residual = residual.max(c.kernel_residual());
            ricci = ricci.max(c.curvature().ricci().amax());
            let v =
                DVector::from_fn(4, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let sigma = Spinor(v).normalized();
            generic = generic.min(max_spinor_action(c.curvature(), c.rep(), &sigma));
        }
        Ok(vec![
            CheckRecord::exact("k3_kernel_dimension", KERNEL, bad_dim)
                .with_detail("joint kernel dimension 2 at every sample"),
            CheckRecord::at_most("k3_kernel_residual", KERNEL, residual, cfg.tol(1e-11)),
            CheckRecord::at_most("k3_ricci", CONVENTION, ricci, cfg.tol(1e-13)),
            CheckRecord::at_least("k3_generic_spinor", SPIN_ACTION, generic, 1e-3),
        ])
    });

    b.run("bochner", BOCHNER, |cfg| {
        let (mut first, mut second): (f64, f64) = (0.0, 0.0);
        for &s in &seeds {
            let c = k3_sample(s)?;
            for _ in 0..tensors {
                let h = random_sym(4, &mut rng);
                let r = bochner_curvature_identity(&c, &h)?;
                first = r.first.iter().fold(first, |m, &v| m.max(v));
                second = r.second.iter().fold(second, |m, &v| m.max(v));
            }
        }
        let detail = format!("{count} curvatures x {tensors} tensors");
        Ok(vec![
            CheckRecord::at_most("bochner.first", BOCHNER, first, cfg.tol(1e-10)).with_detail(detail.clone()),
            CheckRecord::at_most("bochner.second", BOCHNER, second, cfg.tol(1e-10)).with_detail(detail),
        ])
    });
}
