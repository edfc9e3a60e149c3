use nalgebra::{Dim, Matrix, RawStorage};
use num_complex::Complex64;

/// Largest modulus over all entries of a complex matrix or vector.
pub(crate) fn cmax<R: Dim, C: Dim, S: RawStorage<Complex64, R, C>>(m: &Matrix<Complex64, R, C, S>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
