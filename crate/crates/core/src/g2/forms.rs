//! Exterior algebra of `ℝ⁷` over an arbitrary coefficient ring.
//!
//! A basis monomial `e^{i_1 … i_p}` with `i_1 < … < i_p` is stored at the
//! bitmask with bits `i_1, …, i_p` set (indices are 0-based).

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

pub const DIM: usize = 7;
const SLOTS: usize = 1 << DIM;

/// Coefficient ring for forms and vectors.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;
}

impl Scalar for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for num_rational::Rational64 {
    fn from_i64(v: i64) -> Self {
        num_rational::Rational64::from_integer(v)
    }
}

impl Scalar for num_complex::Complex64 {
    fn from_i64(v: i64) -> Self {
        num_complex::Complex64::new(v as f64, 0.0)
    }
}

/// Sign of `e^I ∧ e^J` relative to `e^{I ∪ J}`; zero when `I ∩ J ≠ ∅`.
pub fn wedge_sign(i: usize, j: usize) -> i64 {
    if i & j != 0 {
        return 0;
    }
    // Count pairs (a ∈ I, b ∈ J) with a > b.
    let mut inversions = 0;
    for b in 0..DIM {
        if j & (1 << b) != 0 {
            inversions += (i >> (b + 1)).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Masks of all `p`-element subsets in lexicographic order of their
/// sorted index lists.
pub fn subsets(p: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..SLOTS).filter(|m| m.count_ones() as usize == p).collect();
    out.sort_by_key(|&m| indices(m));
    out
}

pub fn indices(mask: usize) -> Vec<usize> {
    (0..DIM).filter(|i| mask & (1 << i) != 0).collect()
}

pub fn mask_of(idx: &[usize]) -> usize {
    idx.iter().fold(0, |m, &i| m | (1 << i))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Form<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Form<T> {
    pub fn zero() -> Self {
        Self { coeffs: vec![T::zero(); SLOTS] }
    }

    /// `c · e^I` for the sorted 0-based index list `idx`.
    pub fn monomial(idx: &[usize], c: T) -> Self {
        let mut f = Self::zero();
        f.coeffs[mask_of(idx)] = c;
        f
    }

    /// The 1-form `Σ v_i e^i`.
    pub fn one_form(v: &[T]) -> Self {
        let mut f = Self::zero();
        for (i, &c) in v.iter().enumerate() {
            f.coeffs[1 << i] = c;
        }
        f
    }

    pub fn get(&self, mask: usize) -> T {
        self.coeffs[mask]
    }

    pub fn set(&mut self, mask: usize, c: T) {
        self.coeffs[mask] = c;
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| a - b).collect() }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&a| a * s).collect() }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Form<U> {
        Form { coeffs: self.coeffs.iter().map(|&a| f(a)).collect() }
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let s = wedge_sign(i, j);
                if s != 0 {
                    out.coeffs[i | j] = out.coeffs[i | j] + T::from_i64(s) * a * b;
                }
            }
        }
        out
    }

    /// Interior product `v ⌟ self` with the vector `Σ v_a e_a`.
    pub fn interior(&self, v: &[T]) -> Self {
        let mut out = Self::zero();
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (a, &va) in v.iter().enumerate() {
                if va.is_zero() || mask & (1 << a) == 0 {
                    continue;
                }
                let below = (mask & ((1 << a) - 1)).count_ones();
                let s = if below % 2 == 0 { T::one() } else { -T::one() };
                let rest = mask & !(1 << a);
                out.coeffs[rest] = out.coeffs[rest] + s * va * c;
            }
        }
        out
    }

    /// Interior product with the basis vector `e_a`.
    pub fn interior_basis(&self, a: usize) -> Self {
        let mut v = vec![T::zero(); DIM];
        v[a] = T::one();
        self.interior(&v)
    }

    /// Hodge star for the orientation `e^{1…7}`: `α ∧ *β = ⟨α, β⟩ vol`.
    pub fn star(&self) -> Self {
        let full = SLOTS - 1;
        let mut out = Self::zero();
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let comp = full & !mask;
            out.coeffs[comp] = out.coeffs[comp] + T::from_i64(wedge_sign(mask, comp)) * c;
        }
        out
    }

    /// `Σ_I a_I b_I` (no conjugation).
    pub fn dot(&self, other: &Self) -> T {
        self.coeffs.iter().zip(&other.coeffs).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
    }

    /// Coefficients of the degree-`p` part in [`subsets`] order.
    pub fn to_vec(&self, p: usize) -> Vec<T> {
        subsets(p).into_iter().map(|m| self.coeffs[m]).collect()
    }

    pub fn from_vec(p: usize, v: &[T]) -> Self {
        let mut f = Self::zero();
        for (m, &c) in subsets(p).into_iter().zip(v) {
            f.coeffs[m] = c;
        }
        f
    }
}

impl<T: Scalar> Default for Form<T> {
    fn default() -> Self {
        Self::zero()
    }
}

/// Parses a 1-based index string such as `"123"` into a monomial.
pub fn monomial_from_digits<T: Scalar>(digits: &str, c: T) -> Form<T> {
    let idx: Vec<usize> = digits.chars().map(|ch| ch.to_digit(10).expect("digit") as usize - 1).collect();
    let mut sorted = idx.clone();
    sorted.sort_unstable();
    // Permutation sign for unsorted input.
    let mut sign = 1;
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if idx[a] > idx[b] {
                sign = -sign;
            }
        }
    }
    Form::monomial(&sorted, c * T::from_i64(sign))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_basics() {
        let e1: Form<i64> = monomial_from_digits("1", 1);
        let e2: Form<i64> = monomial_from_digits("2", 1);
        assert_eq!(e1.wedge(&e2), monomial_from_digits("12", 1));
        assert_eq!(e2.wedge(&e1), monomial_from_digits("12", -1));
        assert!(e1.wedge(&e1).is_zero());
        assert_eq!(monomial_from_digits::<i64>("21", 1), monomial_from_digits("12", -1));
    }

    #[test]
    fn interior_is_antiderivation() {
        let a: Form<i64> = monomial_from_digits("13", 1);
        let b: Form<i64> = monomial_from_digits("245", 1);
        for v in 0..DIM {
            let lhs = a.wedge(&b).interior_basis(v);
            let rhs = a.interior_basis(v).wedge(&b).add(&a.wedge(&b.interior_basis(v)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn star_squares_to_identity_in_odd_dimension() {
        for p in 0..=DIM {
            for m in subsets(p) {
                let mut f = Form::<i64>::zero();
                f.set(m, 1);
                assert_eq!(f.star().star(), f);
                let vol = f.wedge(&f.star());
                assert_eq!(vol.get(SLOTS - 1), 1);
            }
        }
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subsets(3).len(), 35);
        assert_eq!(indices(subsets(3)[0]), vec![0, 1, 2]);
    }
}
