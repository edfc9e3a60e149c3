//! Uniform sampling grids with spectral differentiation.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::{FourierScalarField, FourierSymTensor};
use crate::error::{Error, Result};

/// `size^n` equispaced points on the torus `Π [0, 2πL_i)`.
#[derive(Clone)]
pub struct Grid {
    n: usize,
    size: usize,
    scales: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid").field("n", &self.n).field("size", &self.size).field("scales", &self.scales).finish()
    }
}

/// Grid resolution used for a band limit `cutoff`.
pub fn default_grid_size(cutoff: usize) -> usize {
    4 * cutoff + 4
}

/// Odd grid resolution for a band limit `cutoff`. Odd grids have no Nyquist
/// slot, so the spectral gradient vanishes only on constants.
pub fn odd_grid_size(cutoff: usize) -> usize {
    4 * cutoff + 5
}

impl Grid {
    pub fn new(n: usize, size: usize) -> Result<Self> {
        Self::with_scales(n, size, vec![1.0; n])
    }

    pub fn with_scales(n: usize, size: usize, scales: Vec<f64>) -> Result<Self> {
        if scales.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: scales.len() });
        }
        if size < 2 {
            return Err(Error::Precondition(format!("grid size must be at least 2, got {size}")));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        Ok(Self { n, size, scales, forward, inverse })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn len(&self) -> usize {
        self.size.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn volume(&self) -> f64 {
        self.scales.iter().product::<f64>() * (2.0 * std::f64::consts::PI).powi(self.n as i32)
    }

    /// Volume element of one grid cell in flat coordinates.
    pub fn cell_volume(&self) -> f64 {
        self.volume() / self.len() as f64
    }

    /// Coordinates of the point with linear index `idx` (axis 0 slowest).
    pub fn point(&self, mut idx: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for a in (0..self.n).rev() {
            let j = idx % self.size;
            idx /= self.size;
            x[a] = 2.0 * std::f64::consts::PI * self.scales[a] * j as f64 / self.size as f64;
        }
        x
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// Integer wavenumber of FFT slot `j`; on even grids the Nyquist slot
    /// maps to 0.
    fn wavenumber(&self, j: usize) -> f64 {
        if 2 * j == self.size {
            0.0
        } else if j < self.size.div_ceil(2) {
            j as f64
        } else {
            j as f64 - self.size as f64
        }
    }

    /// Spectral derivative `∂_axis f` of a real grid function.
    pub fn deriv(&self, f: &[f64], axis: usize) -> Vec<f64> {
        assert_eq!(f.len(), self.len());
        let n_sz = self.size;
        let stride = n_sz.pow((self.n - 1 - axis) as u32);
        let block = stride * n_sz;
        let scale = 1.0 / (self.scales[axis] * n_sz as f64);
        let mut out = vec![0.0; f.len()];
        let mut buf = vec![Complex64::new(0.0, 0.0); n_sz];
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.forward.get_inplace_scratch_len()];
        for base in (0..f.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (j, b) in buf.iter_mut().enumerate() {
                    *b = Complex64::new(f[start + j * stride], 0.0);
                }
                self.forward.process_with_scratch(&mut buf, &mut scratch);
                for (j, b) in buf.iter_mut().enumerate() {
                    *b *= Complex64::new(0.0, self.wavenumber(j) * scale);
                }
                self.inverse.process_with_scratch(&mut buf, &mut scratch);
                for (j, b) in buf.iter().enumerate() {
                    out[start + j * stride] = b.re;
                }
            }
        }
        out
    }

    /// Gradient `(∂_0 f, …, ∂_{n−1} f)`.
    pub fn gradient(&self, f: &[f64]) -> Vec<Vec<f64>> {
        (0..self.n).map(|a| self.deriv(f, a)).collect()
    }

    /// Applies `1/(|k|² + mu)` mode-wise (flat Helmholtz inverse).
    pub fn helmholtz_inverse(&self, f: &[f64], mu: f64) -> Vec<f64> {
        let mut data: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform_all(&mut data, true);
        let n_sz = self.size;
        for (idx, d) in data.iter_mut().enumerate() {
            let mut rest = idx;
            let mut k2 = 0.0;
            for a in (0..self.n).rev() {
                let j = rest % n_sz;
                rest /= n_sz;
                let half = n_sz / 2;
                let kk = if j <= half { j as f64 } else { j as f64 - n_sz as f64 } / self.scales[a];
                k2 += kk * kk;
            }
            *d /= k2 + mu;
        }
        self.transform_all(&mut data, false);
        let norm = 1.0 / self.len() as f64;
        data.iter().map(|z| z.re * norm).collect()
    }

    fn transform_all(&self, data: &mut [Complex64], forward: bool) {
        let plan = if forward { &self.forward } else { &self.inverse };
        let n_sz = self.size;
        let mut buf = vec![Complex64::new(0.0, 0.0); n_sz];
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        for axis in 0..self.n {
            let stride = n_sz.pow((self.n - 1 - axis) as u32);
            let block = stride * n_sz;
            for base in (0..data.len()).step_by(block) {
                for offset in 0..stride {
                    let start = base + offset;
                    for (j, b) in buf.iter_mut().enumerate() {
                        *b = data[start + j * stride];
                    }
                    plan.process_with_scratch(&mut buf, &mut scratch);
                    for (j, b) in buf.iter().enumerate() {
                        data[start + j * stride] = *b;
                    }
                }
            }
        }
    }

    /// Flat-coordinate integral `Σ f · cell`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        f.iter().sum::<f64>() * self.cell_volume()
    }

    pub fn sample_scalar(&self, f: &FourierScalarField) -> Vec<f64> {
        self.points().map(|x| f.eval(&x)).collect()
    }

    /// Samples a symmetric tensor field into `n²` component arrays
    /// (component `i * n + j`).
    pub fn sample_sym(&self, h: &FourierSymTensor) -> Vec<Vec<f64>> {
        let n = self.n;
        let mut comps = vec![vec![0.0; self.len()]; n * n];
        for (p, x) in self.points().enumerate() {
            let v = h.eval(&x);
            for i in 0..n {
                for j in 0..n {
                    comps[i * n + j][p] = v[(i, j)];
                }
            }
        }
        comps
    }

    /// Samples `x ↦ f(x)` for an arbitrary closure.
    pub fn sample_fn(&self, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        self.points().map(|x| f(&x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_trig_is_exact() {
        let g = Grid::with_scales(2, 8, vec![1.0, 2.0]).unwrap();
        let f = g.sample_fn(|x| (2.0 * x[0]).sin() + (1.5 * x[1]).cos());
        let d0 = g.deriv(&f, 0);
        let d1 = g.deriv(&f, 1);
        for (p, x) in g.points().enumerate() {
            assert!((d0[p] - 2.0 * (2.0 * x[0]).cos()).abs() < 1e-13);
            assert!((d1[p] + 1.5 * (1.5 * x[1]).sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_is_antisymmetric() {
        let g = Grid::new(3, 6).unwrap();
        let f: Vec<f64> = (0..g.len()).map(|i| ((i * 37) % 11) as f64 - 5.0).collect();
        let h: Vec<f64> = (0..g.len()).map(|i| ((i * 13) % 7) as f64 - 3.0).collect();
        for a in 0..3 {
            let lhs: f64 = f.iter().zip(g.deriv(&h, a)).map(|(x, y)| x * y).sum();
            let rhs: f64 = g.deriv(&f, a).iter().zip(&h).map(|(x, y)| x * y).sum();
            assert!((lhs + rhs).abs() < 1e-10 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn helmholtz_inverse_on_mode() {
        let g = Grid::new(2, 8).unwrap();
        let f = g.sample_fn(|x| (x[0] + 2.0 * x[1]).cos());
        let u = g.helmholtz_inverse(&f, 1.0);
        for (a, b) in u.iter().zip(&f) {
            assert!((a - b / 6.0).abs() < 1e-14);
        }
    }
}
