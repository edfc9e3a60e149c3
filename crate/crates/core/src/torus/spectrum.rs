//! Low end of the flat Lichnerowicz spectrum on transverse traceless fields
//! and the conformal-Laplacian eigenvalue of a torus metric.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::field::{check_cutoff, is_canonical, is_zero_mode, modes_in_box, FourierSymTensor, Mode};
use super::flat::{lichnerowicz_flat, rayleigh};
use super::grid::{odd_grid_size, Grid};
use super::lambda::{lambda_eig, LambdaSolution};
use super::metric::{FourierMetric, GridMetric};
use crate::error::{Error, Result};

/// One eigenvalue level: the Rayleigh value of a representative field, the
/// dimension of the real TT eigenspace and `‖𝓛h − value·h‖ / ‖h‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumLevel {
    pub value: f64,
    pub multiplicity: usize,
    pub residual: f64,
}

/// Flat or perturbed torus `δ + h` with `h` band-limited.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusDescriptor {
    pub n: usize,
    /// Box cutoff for the TT spectrum.
    pub cutoff: usize,
    /// Perturbation in the sym-tensor JSON layout.
    #[serde(default)]
    pub perturbation: Option<serde_json::Value>,
}

impl TorusDescriptor {
    pub fn metric(&self) -> Result<FourierMetric> {
        match &self.perturbation {
            None => Ok(FourierMetric::flat(self.n)),
            Some(v) => {
                let h = FourierSymTensor::from_json(v)?;
                if h.n() != self.n {
                    return Err(Error::DimensionMismatch { expected: self.n, got: h.n() });
                }
                FourierMetric::perturbed(h)
            }
        }
    }

    /// `λ(g)` on an odd grid that resolves the perturbation.
    pub fn lambda(&self) -> Result<LambdaSolution> {
        let g = self.metric()?;
        let k = g.perturbation().cutoff().max(1);
        let grid = Grid::new(self.n, odd_grid_size(k))?;
        lambda_eig(&GridMetric::from_fourier(&grid, &g)?)
    }
}

/// Unit symmetric `A` with `Ak = 0` and `tr A = 0`, or `None` when the TT
/// space at `k` is trivial.
fn tt_representative(k: &[f64]) -> Option<DMatrix<f64>> {
    let n = k.len();
    let kv = DVector::from_column_slice(k);
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for i in 0..n {
        let mut v = DVector::from_fn(n, |j, _| if i == j { 1.0 } else { 0.0 });
        v -= &kv * (kv.dot(&v) / kv.norm_squared());
        for b in &basis {
            v -= b * b.dot(&v);
        }
        if v.norm() > 1e-8 {
            basis.push(v.normalize());
        }
        if basis.len() == 2 {
            break;
        }
    }
    let [a, b] = [basis.first()?, basis.get(1)?];
    Some((a * b.transpose() + b * a.transpose()) / 2f64.sqrt())
}

/// The lowest `count` levels of `𝓛` on real TT fields with modes in the box
/// of the given cutoff. Level `0` is the constant traceless tensors.
pub fn tt_spectrum(n: usize, cutoff: usize, count: usize) -> Result<Vec<SpectrumLevel>> {
    check_cutoff(n, cutoff)?;
    if n < 2 {
        return Err(Error::DimensionOutOfRange { n, min: 2, max: 8 });
    }
    let per_mode = n * (n - 1) / 2 - 1;
    // Levels keyed by the integer |m|² on the unit-scale torus.
    let mut levels: BTreeMap<i64, Vec<Mode>> = BTreeMap::new();
    for m in modes_in_box(n, cutoff) {
        if is_zero_mode(&m) || is_canonical(&m) {
            levels.entry(m.iter().map(|&v| i64::from(v) * i64::from(v)).sum()).or_default().push(m);
        }
    }
    let mut out = Vec::new();
    for (&norm, modes) in &levels {
        if out.len() == count {
            break;
        }
        let (h, multiplicity) = if norm == 0 {
            let a = DMatrix::from_fn(n, n, |i, j| match (i, j) {
                (0, 0) => 1.0,
                (1, 1) => -1.0,
                _ => 0.0,
            });
            (FourierSymTensor::constant(&a), n * (n + 1) / 2 - 1)
        } else {
            if per_mode == 0 {
                continue;
            }
            let m = modes[0].clone();
            let k: Vec<f64> = m.iter().map(|&v| v as f64).collect();
            let a = tt_representative(&k).ok_or_else(|| Error::Precondition("no TT direction".into()))?;
            (FourierSymTensor::cos_mode(m, &a)?, 2 * modes.len() * per_mode)
        };
        let value = rayleigh(&h);
        let residual = lichnerowicz_flat(&h).minus(&h.scale(value)).l2_norm_sqr().sqrt() / h.l2_norm_sqr().sqrt();
        out.push(SpectrumLevel { value, multiplicity, residual });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_t4_levels() {
        let s = tt_spectrum(4, 2, 5).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s[0].multiplicity, 9);
        assert_eq!(s[0].value, 0.0);
        assert!((s[1].value - 1.0).abs() < 1e-14);
        assert_eq!(s[1].multiplicity, 2 * 4 * 5);
        assert!(s.iter().all(|l| l.residual < 1e-14));
    }

    #[test]
    fn two_dimensional_torus_has_only_constants() {
        let s = tt_spectrum(2, 3, 4).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].multiplicity, 2);
    }

    #[test]
    fn empty_request() {
        assert!(tt_spectrum(3, 1, 0).unwrap().is_empty());
    }
}
