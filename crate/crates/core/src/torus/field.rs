//! Truncated Fourier fields on flat tori.
//!
//! A torus with scales `L` is `Π_i [0, 2πL_i)`; the integer mode `m`
//! carries the wavevector `k_i = m_i / L_i`, and a field is
//! `Σ_m c_m e^{i k(m)·x}`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

pub type Mode = Vec<i32>;

/// Largest admissible cutoff for a torus of dimension `n`.
pub fn cutoff_limit(n: usize) -> usize {
    if n <= 4 {
        8
    } else {
        4
    }
}

pub fn check_cutoff(n: usize, cutoff: usize) -> Result<()> {
    let limit = cutoff_limit(n);
    if cutoff > limit {
        return Err(Error::CutoffOutOfRange { cutoff, limit, n });
    }
    Ok(())
}

pub fn negate(m: &[i32]) -> Mode {
    m.iter().map(|v| -v).collect()
}

pub fn is_zero_mode(m: &[i32]) -> bool {
    m.iter().all(|&v| v == 0)
}

/// Canonical representative of `{m, −m}`: the first nonzero entry is positive.
pub fn is_canonical(m: &[i32]) -> bool {
    m.iter().find(|&&v| v != 0).is_none_or(|&v| v > 0)
}

/// All modes with `max |m_i| ≤ cutoff`, in lexicographic order.
pub fn modes_in_box(n: usize, cutoff: usize) -> Vec<Mode> {
    let k = cutoff as i32;
    let side = 2 * cutoff + 1;
    let total = side.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut m = vec![0; n];
            for slot in m.iter_mut().rev() {
                *slot = (idx % side) as i32 - k;
                idx /= side;
            }
            m
        })
        .collect()
}

/// Coefficient types that can live in a Fourier field.
pub trait Coefficient: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Complex64, Output = Self> {
    fn conj_coeff(&self) -> Self;
    /// `Re ⟨self, other⟩` with the Hermitian product antilinear in `self`.
    fn dot_re(&self, other: &Self) -> f64;
    fn max_abs(&self) -> f64;
    fn zero_like(&self) -> Self;
}

impl Coefficient for Complex64 {
    fn conj_coeff(&self) -> Self {
        self.conj()
    }
    fn dot_re(&self, other: &Self) -> f64 {
        (self.conj() * other).re
    }
    fn max_abs(&self) -> f64 {
        self.norm()
    }
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
}

impl Coefficient for DMatrix<Complex64> {
    fn conj_coeff(&self) -> Self {
        self.map(|z| z.conj())
    }
    fn dot_re(&self, other: &Self) -> f64 {
        self.iter().zip(other.iter()).map(|(a, b)| (a.conj() * b).re).sum()
    }
    fn max_abs(&self) -> f64 {
        self.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
    fn zero_like(&self) -> Self {
        DMatrix::zeros(self.nrows(), self.ncols())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourierField<T> {
    n: usize,
    cutoff: usize,
    scales: Vec<f64>,
    coeffs: BTreeMap<Mode, T>,
}

pub type FourierScalarField = FourierField<Complex64>;
/// Symmetric 2-tensor field; each coefficient is a symmetric `n × n` matrix.
pub type FourierSymTensor = FourierField<DMatrix<Complex64>>;

impl<T: Coefficient> FourierField<T> {
    pub fn new(n: usize, cutoff: usize) -> Self {
        Self { n, cutoff, scales: vec![1.0; n], coeffs: BTreeMap::new() }
    }

    pub fn with_scales(n: usize, cutoff: usize, scales: Vec<f64>) -> Result<Self> {
        if scales.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: scales.len() });
        }
        if scales.iter().any(|&s| s <= 0.0) {
            return Err(Error::Precondition("torus scales must be positive".into()));
        }
        Ok(Self { n, cutoff, scales, coeffs: BTreeMap::new() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn coeffs(&self) -> &BTreeMap<Mode, T> {
        &self.coeffs
    }

    pub fn get(&self, m: &[i32]) -> Option<&T> {
        self.coeffs.get(m)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mode, &T)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Product of the scales: the volume divided by `(2π)^n`.
    pub fn cell_measure(&self) -> f64 {
        self.scales.iter().product()
    }

    pub fn volume(&self) -> f64 {
        self.cell_measure() * (2.0 * std::f64::consts::PI).powi(self.n as i32)
    }

    pub fn wavevector(&self, m: &[i32]) -> Vec<f64> {
        m.iter().zip(&self.scales).map(|(&mi, &l)| mi as f64 / l).collect()
    }

    fn check_mode(&self, m: &[i32]) -> Result<()> {
        if m.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: m.len() });
        }
        let worst = m.iter().map(|v| v.unsigned_abs() as usize).max().unwrap_or(0);
        if worst > self.cutoff {
            return Err(Error::CutoffOutOfRange { cutoff: worst, limit: self.cutoff, n: self.n });
        }
        Ok(())
    }

    /// Sets the coefficient at `m` without touching `−m`.
    pub fn set(&mut self, m: Mode, c: T) -> Result<()> {
        self.check_mode(&m)?;
        self.coeffs.insert(m, c);
        Ok(())
    }

    /// Adds `c e^{ik·x} + conj(c) e^{−ik·x}` (or `Re c` at `m = 0`), keeping
    /// the field real.
    pub fn add_real_mode(&mut self, m: Mode, c: T) -> Result<()> {
        self.check_mode(&m)?;
        if is_zero_mode(&m) {
            let re = (c.clone() + c.conj_coeff()) * Complex64::new(0.5, 0.0);
            self.accumulate(m, re);
        } else {
            let neg = negate(&m);
            self.accumulate(neg, c.conj_coeff());
            self.accumulate(m, c);
        }
        Ok(())
    }

    fn accumulate(&mut self, m: Mode, c: T) {
        match self.coeffs.get_mut(&m) {
            Some(existing) => *existing = existing.clone() + c,
            None => {
                self.coeffs.insert(m, c);
            }
        }
    }

    /// Largest deviation from the reality condition `c_{−m} = conj(c_m)`.
    pub fn reality_defect(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(m, c)| match self.coeffs.get(&negate(m)) {
                Some(d) => (c.clone() - d.conj_coeff()).max_abs(),
                None => c.max_abs(),
            })
            .fold(0.0, f64::max)
    }

    /// `(1/(2π)^n) ∫ Re⟨self, other⟩`: Parseval sum times the cell measure.
    pub fn cell_inner(&self, other: &Self) -> f64 {
        let sum: f64 = self.coeffs.iter().filter_map(|(m, a)| other.coeffs.get(m).map(|b| a.dot_re(b))).sum();
        sum * self.cell_measure()
    }

    /// `∫ Re⟨self, other⟩ dV` over the torus.
    pub fn l2_inner(&self, other: &Self) -> f64 {
        self.cell_inner(other) * (2.0 * std::f64::consts::PI).powi(self.n as i32)
    }

    pub fn l2_norm_sqr(&self) -> f64 {
        self.l2_inner(self)
    }

    /// Mean square `(1/Vol) ∫ |f|²`.
    pub fn mean_sqr(&self) -> f64 {
        self.coeffs.values().map(|c| c.dot_re(c)).sum()
    }

    /// Applies a mode-wise linear map.
    pub fn map_modes<U: Coefficient>(&self, mut f: impl FnMut(&[i32], &[f64], &T) -> U) -> FourierField<U> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(m, c)| {
                let k = self.wavevector(m);
                (m.clone(), f(m, &k, c))
            })
            .collect();
        FourierField { n: self.n, cutoff: self.cutoff, scales: self.scales.clone(), coeffs }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_modes(|_, _, c| c.clone() * Complex64::new(s, 0.0))
    }

    fn binary(&self, other: &Self, sign: f64) -> Self {
        let mut out = self.clone();
        out.cutoff = self.cutoff.max(other.cutoff);
        for (m, c) in &other.coeffs {
            out.accumulate(m.clone(), c.clone() * Complex64::new(sign, 0.0));
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.binary(other, 1.0)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.binary(other, -1.0)
    }

    /// Largest coefficient deviation between two fields.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        self.minus(other).coeffs.values().map(Coefficient::max_abs).fold(0.0, f64::max)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.values().map(Coefficient::max_abs).fold(0.0, f64::max)
    }

    /// Drops coefficients whose modulus is at most `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.retain(|_, c| c.max_abs() > tol);
        out
    }

    pub(crate) fn from_parts(n: usize, cutoff: usize, scales: Vec<f64>, coeffs: BTreeMap<Mode, T>) -> Self {
        Self { n, cutoff, scales, coeffs }
    }
}

impl FourierScalarField {
    pub fn constant(n: usize, value: f64) -> Self {
        let mut f = Self::new(n, 0);
        f.coeffs.insert(vec![0; n], Complex64::new(value, 0.0));
        f
    }

    /// `a cos(k(m)·x) + b sin(k(m)·x)`.
    pub fn trig(n: usize, m: Mode, a: f64, b: f64) -> Result<Self> {
        let cutoff = m.iter().map(|v| v.unsigned_abs() as usize).max().unwrap_or(0);
        let mut f = Self::new(n, cutoff);
        f.add_real_mode(m, Complex64::new(a / 2.0, -b / 2.0))?;
        Ok(f)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .map(|(m, c)| {
                let phase: f64 = self.wavevector(m).iter().zip(x).map(|(k, xi)| k * xi).sum();
                (c * Complex64::from_polar(1.0, phase)).re
            })
            .sum()
    }

    /// Random real field with `count` conjugate pairs of modes.
    pub fn random(n: usize, cutoff: usize, count: usize, amplitude: f64, rng: &mut impl Rng) -> Self {
        let mut f = Self::new(n, cutoff);
        for m in random_modes(n, cutoff, count, rng) {
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * amplitude;
            f.add_real_mode(m, c).expect("mode within cutoff");
        }
        f
    }
}

impl FourierSymTensor {
    /// `A cos(k(m)·x)` for a real symmetric matrix `A`.
    pub fn cos_mode(m: Mode, a: &DMatrix<f64>) -> Result<Self> {
        let n = m.len();
        let cutoff = m.iter().map(|v| v.unsigned_abs() as usize).max().unwrap_or(0);
        let mut f = Self::new(n, cutoff);
        f.add_real_mode(m, a.map(|v| Complex64::new(v / 2.0, 0.0)))?;
        Ok(f)
    }

    /// `A sin(k(m)·x)` for a real symmetric matrix `A`.
    pub fn sin_mode(m: Mode, a: &DMatrix<f64>) -> Result<Self> {
        let n = m.len();
        let cutoff = m.iter().map(|v| v.unsigned_abs() as usize).max().unwrap_or(0);
        let mut f = Self::new(n, cutoff);
        f.add_real_mode(m, a.map(|v| Complex64::new(0.0, -v / 2.0)))?;
        Ok(f)
    }

    pub fn constant(a: &DMatrix<f64>) -> Self {
        let n = a.nrows();
        let mut f = Self::new(n, 0);
        f.coeffs.insert(vec![0; n], a.map(|v| Complex64::new(v, 0.0)));
        f
    }

    /// `u δ` for a scalar field `u`.
    pub fn conformal(u: &FourierScalarField) -> Self {
        let n = u.n();
        u.map_modes(|_, _, c| DMatrix::<Complex64>::identity(n, n) * *c)
    }

    pub fn eval(&self, x: &[f64]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for (m, c) in &self.coeffs {
            let phase: f64 = self.wavevector(m).iter().zip(x).map(|(k, xi)| k * xi).sum();
            let e = Complex64::from_polar(1.0, phase);
            out += c.map(|z| (z * e).re);
        }
        out
    }

    /// Random real symmetric field with `count` conjugate pairs of modes.
    pub fn random(n: usize, cutoff: usize, count: usize, amplitude: f64, rng: &mut impl Rng) -> Self {
        let mut f = Self::new(n, cutoff);
        for m in random_modes(n, cutoff, count, rng) {
            let mut a = DMatrix::<Complex64>::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * amplitude;
                    a[(i, j)] = z;
                    a[(j, i)] = z;
                }
            }
            f.add_real_mode(m, a).expect("mode within cutoff");
        }
        f
    }

    /// Pointwise trace field `tr h` with respect to the flat metric.
    pub fn flat_trace(&self) -> FourierScalarField {
        self.map_modes(|_, _, c| c.trace())
    }

    /// Largest violation of `h_ij = h_ji` over all coefficients.
    pub fn symmetry_defect(&self) -> f64 {
        self.coeffs.values().map(|c| (c - c.transpose()).max_abs()).fold(0.0, f64::max)
    }
}

/// `count` distinct random modes (excluding zero), canonical up to sign.
pub fn random_modes(n: usize, cutoff: usize, count: usize, rng: &mut impl Rng) -> Vec<Mode> {
    let k = cutoff as i32;
    let mut chosen: Vec<Mode> = Vec::with_capacity(count);
    if cutoff == 0 {
        return chosen;
    }
    let available = ((2 * cutoff + 1).pow(n as u32) - 1) / 2;
    while chosen.len() < count.min(available) {
        let m: Mode = (0..n).map(|_| rng.random_range(-k..=k)).collect();
        if is_zero_mode(&m) {
            continue;
        }
        let m = if is_canonical(&m) { m } else { negate(&m) };
        if !chosen.contains(&m) {
            chosen.push(m);
        }
    }
    chosen
}

fn mode_key(m: &[i32]) -> String {
    m.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_mode_key(s: &str, n: usize) -> Result<Mode> {
    let m: std::result::Result<Mode, _> = s.split(',').map(|p| p.trim().parse::<i32>()).collect();
    let m = m.map_err(|e| Error::Config(format!("bad frequency key {s:?}: {e}")))?;
    if m.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.len() });
    }
    Ok(m)
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn complex_from_json(v: &Value) -> Result<Complex64> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(Error::Config("complex entry must be [re, im] numbers".into())),
        },
        _ => Err(Error::Config("complex entry must be a two-element array".into())),
    }
}

fn header_json(n: usize, cutoff: usize, scales: &[f64], kind: &str) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(kind));
    obj.insert("n".into(), json!(n));
    obj.insert("cutoff".into(), json!(cutoff));
    obj.insert("scales".into(), json!(scales));
    obj
}

fn header_from_json(v: &Value, kind: &str) -> Result<(usize, usize, Vec<f64>)> {
    let found = v.get("kind").and_then(Value::as_str).unwrap_or("");
    if found != kind {
        return Err(Error::Config(format!("expected field kind {kind:?}, found {found:?}")));
    }
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Config("missing n".into()))? as usize;
    let cutoff =
        v.get("cutoff").and_then(Value::as_u64).ok_or_else(|| Error::Config("missing cutoff".into()))? as usize;
    let scales = match v.get("scales") {
        Some(s) => serde_json::from_value(s.clone())?,
        None => vec![1.0; n],
    };
    Ok((n, cutoff, scales))
}

impl FourierScalarField {
    pub fn to_json(&self) -> Value {
        let mut obj = header_json(self.n, self.cutoff, &self.scales, "scalar");
        let coeffs: Map<String, Value> = self.coeffs.iter().map(|(m, c)| (mode_key(m), complex_json(*c))).collect();
        obj.insert("coeffs".into(), Value::Object(coeffs));
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (n, cutoff, scales) = header_from_json(v, "scalar")?;
        let mut f = Self::with_scales(n, cutoff, scales)?;
        if let Some(Value::Object(coeffs)) = v.get("coeffs") {
            for (k, c) in coeffs {
                f.set(parse_mode_key(k, n)?, complex_from_json(c)?)?;
            }
        }
        Ok(f)
    }
}

impl FourierSymTensor {
    pub fn to_json(&self) -> Value {
        let mut obj = header_json(self.n, self.cutoff, &self.scales, "sym_tensor");
        let coeffs: Map<String, Value> = self
            .coeffs
            .iter()
            .map(|(m, c)| {
                let rows: Vec<Value> = (0..c.nrows())
                    .map(|i| Value::Array((0..c.ncols()).map(|j| complex_json(c[(i, j)])).collect()))
                    .collect();
                (mode_key(m), Value::Array(rows))
            })
            .collect();
        obj.insert("coeffs".into(), Value::Object(coeffs));
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (n, cutoff, scales) = header_from_json(v, "sym_tensor")?;
        let mut f = Self::with_scales(n, cutoff, scales)?;
        if let Some(Value::Object(coeffs)) = v.get("coeffs") {
            for (k, rows) in coeffs {
                let rows =
                    rows.as_array().ok_or_else(|| Error::Config("tensor coefficient must be a matrix".into()))?;
                if rows.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: rows.len() });
                }
                let mut c = DMatrix::<Complex64>::zeros(n, n);
                for (i, row) in rows.iter().enumerate() {
                    let row = row.as_array().ok_or_else(|| Error::Config("matrix row must be an array".into()))?;
                    if row.len() != n {
                        return Err(Error::DimensionMismatch { expected: n, got: row.len() });
                    }
                    for (j, z) in row.iter().enumerate() {
                        c[(i, j)] = complex_from_json(z)?;
                    }
                }
                f.set(parse_mode_key(k, n)?, c)?;
            }
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn box_enumeration() {
        let modes = modes_in_box(2, 1);
        assert_eq!(modes.len(), 9);
        assert_eq!(modes[0], vec![-1, -1]);
        assert_eq!(modes[8], vec![1, 1]);
    }

    #[test]
    fn trig_evaluates_cos_and_sin() {
        let f = FourierScalarField::trig(2, vec![1, 2], 0.7, -0.3).unwrap();
        let x = [0.4, 1.1];
        let phase: f64 = 0.4 + 2.0 * 1.1;
        assert!((f.eval(&x) - (0.7 * phase.cos() - 0.3 * phase.sin())).abs() < 1e-15);
        assert_eq!(f.reality_defect(), 0.0);
    }

    #[test]
    fn parseval_norm_of_cosine() {
        let f = FourierScalarField::trig(3, vec![1, 0, 0], 2.0, 0.0).unwrap();
        // mean of 4cos² is 2
        assert!((f.mean_sqr() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn random_fields_are_real_and_json_round_trip() {
        let mut rng = seeded(2);
        let h = FourierSymTensor::random(3, 2, 5, 1.0, &mut rng);
        assert_eq!(h.reality_defect(), 0.0);
        assert_eq!(h.symmetry_defect(), 0.0);
        let back = FourierSymTensor::from_json(&h.to_json()).unwrap();
        assert_eq!(back, h);
        let f = FourierScalarField::random(4, 3, 6, 0.5, &mut rng);
        assert_eq!(FourierScalarField::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn cutoff_guard() {
        assert!(check_cutoff(4, 8).is_ok());
        assert!(check_cutoff(4, 9).is_err());
        assert!(check_cutoff(7, 5).is_err());
        let mut f = FourierScalarField::new(2, 1);
        assert!(f.set(vec![2, 0], Complex64::new(1.0, 0.0)).is_err());
    }
}
