//! Dense univariate polynomials in the monomial basis.
//!
//! Coefficients are stored from degree 0 upward. The coefficient type is
//! any [`Ring`], so the same recurrences run over `f64` for numerics and
//! over `i64`/`i128` where a result must be checked exactly.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

/// Minimal commutative ring used as a coefficient type.
pub trait Ring:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const ZERO: Self;
    const ONE: Self;
    fn from_i64(v: i64) -> Self;
}

impl Ring for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Ring for i64 {
    const ZERO: Self = 0;
    const ONE: Self = 1;
    fn from_i64(v: i64) -> Self {
        v
    }
}

impl Ring for i128 {
    const ZERO: Self = 0;
    const ONE: Self = 1;
    fn from_i64(v: i64) -> Self {
        v as i128
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Poly<T> {
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(T::ONE)
    }

    /// `λ - c`.
    pub fn shifted_identity(c: T) -> Self {
        Poly {
            coeffs: vec![-c, T::ONE],
        }
    }

    /// `λ^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![T::ZERO; n + 1];
        coeffs[n] = T::ONE;
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `λ^i`, zero past the stored length.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).copied().unwrap_or(T::ZERO)
    }

    /// Degree ignoring trailing zero coefficients; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != T::ZERO)
    }

    /// Drops trailing exact zeros.
    pub fn trimmed(mut self) -> Self {
        while self.coeffs.last() == Some(&T::ZERO) {
            self.coeffs.pop();
        }
        self
    }

    /// Pads with zeros to exactly `len` coefficients (never truncates).
    pub fn padded(mut self, len: usize) -> Self {
        if self.coeffs.len() < len {
            self.coeffs.resize(len, T::ZERO);
        }
        self
    }

    pub fn scale(&self, s: T) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    /// Multiplies by `(λ - c)` without a general convolution.
    pub fn mul_shifted_identity(&self, c: T) -> Self {
        let mut out = vec![T::ZERO; self.coeffs.len() + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            out[i + 1] = out[i + 1] + a;
            out[i] = out[i] - a * c;
        }
        Poly { coeffs: out }
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::ZERO, |acc, &c| acc * x + c)
    }

    /// Substitutes `λ -> -λ`.
    pub fn reflected(&self) -> Self {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
                .collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * T::from_i64(i as i64))
                .collect(),
        }
    }
}

impl Poly<f64> {
    /// Largest coefficient difference, treating missing entries as zero.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|i| (self.coeff(i) - other.coeff(i)).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        crate::math::max_abs(&self.coeffs)
    }
}

impl<T: Ring> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly {
            coeffs: (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect(),
        }
    }
}

impl<T: Ring> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly {
            coeffs: (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect(),
        }
    }
}

impl<T: Ring> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![T::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Poly { coeffs: out }
    }
}

impl<T: Ring> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

impl<T: Ring> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Poly<T>) -> Poly<T> {
        &self + &rhs
    }
}

impl<T: Ring> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Poly<T>) -> Poly<T> {
        &self - &rhs
    }
}
