//! Dense square matrices over the Gaussian integers.
//!
//! Every Clifford generator built in this crate has entries in `Z[i]`, so the
//! defining relations can be checked with `==` instead of a tolerance.

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};

pub type Gauss = Complex<i64>;

pub const ZERO: Gauss = Complex { re: 0, im: 0 };
pub const ONE: Gauss = Complex { re: 1, im: 0 };
pub const I: Gauss = Complex { re: 0, im: 1 };

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussMatrix {
    dim: usize,
    data: Vec<Gauss>,
}

impl GaussMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, ONE);
        }
        m
    }

    pub fn from_rows(rows: &[&[Gauss]]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "matrix must be square");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Gauss {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Gauss) {
        self.data[i * self.dim + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b != ZERO {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: Gauss) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let mut out = Self::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                let s = self.get(i, j);
                if s == ZERO {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out.set(i * b + k, j * b + l, s * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == ZERO)
    }

    /// Largest absolute real or imaginary part over all entries.
    pub fn max_abs(&self) -> i64 {
        self.data.iter().map(|v| v.re.abs().max(v.im.abs())).max().unwrap_or(0)
    }

    pub fn mul_vec(&self, v: &[Gauss]) -> Vec<Gauss> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| {
            let v = self.get(i, j);
            Complex64::new(v.re as f64, v.im as f64)
        })
    }
}

/// Formats a Gaussian integer as `"a+bi"`.
pub fn format_gauss(v: Gauss) -> String {
    if v.im < 0 {
        format!("{}{}i", v.re, v.im)
    } else {
        format!("{}+{}i", v.re, v.im)
    }
}

pub(crate) fn pauli() -> [GaussMatrix; 3] {
    let s1 = GaussMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]);
    let s2 = GaussMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]]);
    let s3 = GaussMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]]);
    [s1, s2, s3]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let [s1, s2, s3] = pauli();
        let id = GaussMatrix::identity(2);
        for s in [&s1, &s2, &s3] {
            assert_eq!(s.mul(s), id);
            assert_eq!(s.adjoint(), *s);
        }
        assert_eq!(s1.mul(&s2), s3.scale(I));
    }

    #[test]
    fn kron_dimensions_and_mixed_product() {
        let [s1, s2, _] = pauli();
        let a = s1.kron(&s2);
        assert_eq!(a.dim(), 4);
        // (A⊗B)(C⊗D) = AC⊗BD
        let lhs = a.mul(&s2.kron(&s1));
        let rhs = s1.mul(&s2).kron(&s2.mul(&s1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn gauss_formatting() {
        assert_eq!(format_gauss(Complex::new(1, -2)), "1-2i");
        assert_eq!(format_gauss(Complex::new(0, 1)), "0+1i");
    }
}
