//! Run configuration shared by the verification suites and the CLI.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    /// Multiplies every floating-point tolerance; exact checks are unaffected.
    pub tolerance_scale: f64,
    /// Fourier cutoff for band-limited fields on tori of dimension ≤ 4.
    pub cutoff: usize,
    /// Fourier cutoff for fields on `T⁷`.
    pub cutoff_n7: usize,
    /// Fourier cutoff of the perturbations fed to the `λ(g)` solver.
    pub lambda_cutoff: usize,
    pub samples: Samples,
}

/// Sample counts of the seeded batteries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Samples {
    pub phi_isometry: usize,
    pub equivariance: usize,
    pub bochner_curvatures: usize,
    pub bochner_tensors: usize,
    pub rayleigh: usize,
    pub dirac_fields: usize,
    pub lambda_first: usize,
    pub lambda_second: usize,
    pub conformal_pairs: usize,
    pub g2_rational: usize,
    pub g2_fields: usize,
    pub warped_oracle: usize,
    pub bound_samples: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self { seed: 1, tolerance_scale: 1.0, cutoff: 2, cutoff_n7: 1, lambda_cutoff: 1, samples: Samples::default() }
    }
}

impl Default for Samples {
    fn default() -> Self {
        Self {
            phi_isometry: 100,
            equivariance: 10,
            bochner_curvatures: 20,
            bochner_tensors: 20,
            rayleigh: 200,
            dirac_fields: 5,
            lambda_first: 20,
            lambda_second: 10,
            conformal_pairs: 20,
            g2_rational: 100,
            g2_fields: 5,
            warped_oracle: 50,
            bound_samples: 100,
        }
    }
}

impl Config {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.tolerance_scale.is_finite() && self.tolerance_scale > 0.0) {
            return bad(format!("tolerance_scale must be positive, got {}", self.tolerance_scale));
        }
        for (name, value, limit) in [
            ("cutoff", self.cutoff, crate::torus::field::cutoff_limit(4)),
            ("cutoff_n7", self.cutoff_n7, crate::torus::field::cutoff_limit(7)),
            ("lambda_cutoff", self.lambda_cutoff, 2),
        ] {
            if value == 0 || value > limit {
                return bad(format!("{name} must lie in 1..={limit}, got {value}"));
            }
        }
        let s = &self.samples;
        for (name, value) in [
            ("phi_isometry", s.phi_isometry),
            ("equivariance", s.equivariance),
            ("bochner_curvatures", s.bochner_curvatures),
            ("bochner_tensors", s.bochner_tensors),
            ("rayleigh", s.rayleigh),
            ("dirac_fields", s.dirac_fields),
            ("lambda_first", s.lambda_first),
            ("lambda_second", s.lambda_second),
            ("conformal_pairs", s.conformal_pairs),
            ("g2_rational", s.g2_rational),
            ("g2_fields", s.g2_fields),
            ("warped_oracle", s.warped_oracle),
            ("bound_samples", s.bound_samples),
        ] {
            if value == 0 || value > 100_000 {
                return bad(format!("samples.{name} must lie in 1..=100000, got {value}"));
            }
        }
        Ok(())
    }

    /// A floating-point tolerance scaled by `tolerance_scale`.
    pub fn tol(&self, base: f64) -> f64 {
        base * self.tolerance_scale
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_round_trip() {
        let cfg = Config::default();
        cfg.validate().unwrap();
        let back = Config::from_json_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_documents_fill_defaults() {
        let cfg = Config::from_json_str(r#"{"seed": 9, "samples": {"rayleigh": 5}}"#).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.samples.rayleigh, 5);
        assert_eq!(cfg.samples.phi_isometry, 100);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(matches!(Config::from_json_str(r#"{"cutoff": 99}"#), Err(Error::Config(_))));
        assert!(matches!(Config::from_json_str(r#"{"tolerance_scale": 0}"#), Err(Error::Config(_))));
        assert!(matches!(Config::from_json_str(r#"{"unknown": 1}"#), Err(Error::Config(_))));
    }
}
