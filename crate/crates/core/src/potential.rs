//! Periodic potentials, the odd subspace and its sine basis.
//!
//! A potential of period `N+1` is stored as `values[0..=N]`, i.e. the
//! 1-based `q_n` lives at `values[n-1]`. Odd potentials have even period
//! `2k` and satisfy `q_{2k+1-n} = -q_n`; their free coordinates are
//! `q_1..q_k` and their Fourier coordinates are `q̂_m = (q, ê_m)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::linalg::Matrix;
use crate::math::{cos, max_abs, norm2, sin, sqrt};
use crate::{Error, Result};

/// Relative tolerance for the zero-mean and antisymmetry checks.
pub const STRUCTURE_TOL: f64 = 1e-12;

fn structure_tol(values: &[f64]) -> f64 {
    STRUCTURE_TOL * norm2(values).max(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    values: Vec<f64>,
}

impl Potential {
    /// Validates period `>= 2` and zero mean.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidPeriod(values.len()));
        }
        let sum: f64 = values.iter().sum();
        if sum.abs() > structure_tol(&values) {
            return Err(Error::NotZeroMean { residual: sum });
        }
        Ok(Potential { values })
    }

    pub fn zero(period: usize) -> Result<Self> {
        Self::new(vec![0.0; period])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `N + 1`.
    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn norm(&self) -> f64 {
        norm2(&self.values)
    }

    /// `M_ν q = (q_2, …, q_{N+1}, q_1)`.
    pub fn shift(&self) -> Potential {
        let mut values = self.values.clone();
        values.rotate_left(1);
        Potential { values }
    }

    /// `M_τ q = (q_{N+1}, …, q_1)`.
    pub fn reflect(&self) -> Potential {
        let mut values = self.values.clone();
        values.reverse();
        Potential { values }
    }

    pub fn negate(&self) -> Potential {
        self.scaled(-1.0)
    }

    pub fn scaled(&self, t: f64) -> Potential {
        Potential {
            values: self.values.iter().map(|v| v * t).collect(),
        }
    }

    /// `f_s(q) = (q, M_ν^s q)`; `s` is taken modulo the period.
    pub fn quad_form(&self, s: usize) -> f64 {
        let p = self.values.len();
        (0..p)
            .map(|n| self.values[n] * self.values[(n + s) % p])
            .sum()
    }
}

/// `ê_m` for `m = 1..k`, as `2k` values.
pub fn basis_vector(k: usize, m: usize) -> Result<Vec<f64>> {
    if m == 0 || m > k {
        return Err(Error::IndexOutOfRange { index: m, len: k });
    }
    let mut scale = 1.0 / sqrt(k as f64);
    if m == k {
        scale /= core::f64::consts::SQRT_2;
    }
    Ok((1..=2 * k)
        .map(|n| scale * sin(((2 * n - 1) * m) as f64 * PI / (2 * k) as f64))
        .collect())
}

/// `W[n][m] = cos(π n m / k)` for `n, m = 1..k`.
pub fn w_matrix(k: usize) -> Matrix {
    Matrix::from_fn(k, k, |i, j| cos(PI * ((i + 1) * (j + 1)) as f64 / k as f64))
}

/// `U[n][m] = ∂q̂_m / ∂q_n = 2 ê_m[n]` on the free coordinates `n = 1..k`.
///
/// With this convention the free-coordinate Jacobian of any map `G` is
/// `d_q G = (∂G/∂q̂) · Uᵀ`, and `U/√2` is orthogonal.
pub fn u_matrix(k: usize) -> Matrix {
    let basis: Vec<Vec<f64>> = (1..=k).map(|m| basis_vector(k, m).unwrap()).collect();
    Matrix::from_fn(k, k, |n, m| 2.0 * basis[m][n])
}

/// Antisymmetry residual `max |q_{2k+1-n} + q_n|`, or an error if the length
/// is odd.
fn odd_residual(values: &[f64]) -> Result<f64> {
    let p = values.len();
    if p < 2 || p % 2 == 1 {
        return Err(Error::InvalidPeriod(p));
    }
    Ok((0..p / 2)
        .map(|n| (values[n] + values[p - 1 - n]).abs())
        .fold(0.0, f64::max))
}

/// Fourier coordinates `q̂_m = (q, ê_m)` of an odd sequence.
pub fn coords_from_values(values: &[f64]) -> Result<Vec<f64>> {
    let residual = odd_residual(values)?;
    if residual > structure_tol(values) {
        return Err(Error::NotOdd { residual });
    }
    let k = values.len() / 2;
    Ok((1..=k)
        .map(|m| {
            let e = basis_vector(k, m).unwrap();
            e.iter().zip(values).map(|(a, b)| a * b).sum()
        })
        .collect())
}

/// A potential in the odd subspace together with its Fourier coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct OddPotential {
    potential: Potential,
    qhat: Vec<f64>,
}

impl OddPotential {
    /// `q = Σ_m q̂_m ê_m`, with `k = qhat.len()`.
    ///
    /// # Panics
    /// If `qhat` is empty.
    pub fn from_coords(qhat: &[f64]) -> Self {
        let k = qhat.len();
        assert!(k >= 1, "an odd potential needs k >= 1");
        let mut values = vec![0.0; 2 * k];
        for (m, &c) in qhat.iter().enumerate() {
            let e = basis_vector(k, m + 1).unwrap();
            for (v, b) in values.iter_mut().zip(&e) {
                *v += c * b;
            }
        }
        // Enforce exact antisymmetry so downstream evenness holds bit-for-bit.
        for n in 0..k {
            let a = 0.5 * (values[n] - values[2 * k - 1 - n]);
            values[n] = a;
            values[2 * k - 1 - n] = -a;
        }
        OddPotential {
            potential: Potential { values },
            qhat: qhat.to_vec(),
        }
    }

    pub fn from_values(values: &[f64]) -> Result<Self> {
        let qhat = coords_from_values(values)?;
        Ok(OddPotential {
            potential: Potential::new(values.to_vec())?,
            qhat,
        })
    }

    /// Builds `(q_1, …, q_k, -q_k, …, -q_1)` from the free coordinates.
    pub fn from_free(free: &[f64]) -> Self {
        let k = free.len();
        assert!(k >= 1, "an odd potential needs k >= 1");
        let mut values = free.to_vec();
        values.extend(free.iter().rev().map(|v| -v));
        let qhat = coords_from_values(&values).expect("constructed odd");
        OddPotential {
            potential: Potential { values },
            qhat,
        }
    }

    pub fn zero(k: usize) -> Self {
        Self::from_coords(&vec![0.0; k])
    }

    pub fn k(&self) -> usize {
        self.qhat.len()
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn values(&self) -> &[f64] {
        self.potential.values()
    }

    /// `q_1..q_k`.
    pub fn free(&self) -> &[f64] {
        &self.potential.values[..self.k()]
    }

    pub fn qhat(&self) -> &[f64] {
        &self.qhat
    }

    pub fn norm(&self) -> f64 {
        self.potential.norm()
    }

    pub fn scaled(&self, t: f64) -> OddPotential {
        OddPotential {
            potential: self.potential.scaled(t),
            qhat: self.qhat.iter().map(|c| c * t).collect(),
        }
    }

    /// Flips `q̂_n` where `signs[n]` is negative.
    pub fn flipped(&self, signs: &[f64]) -> OddPotential {
        assert_eq!(signs.len(), self.k());
        let qhat: Vec<f64> = self
            .qhat
            .iter()
            .zip(signs)
            .map(|(c, s)| if *s < 0.0 { -c } else { *c })
            .collect();
        Self::from_coords(&qhat)
    }

    /// `(f_1(q), …, f_k(q))`.
    pub fn f_vector(&self) -> Vec<f64> {
        (1..=self.k())
            .map(|s| self.potential.quad_form(s))
            .collect()
    }

    /// `(q̂_1², …, q̂_k²)`.
    pub fn qhat_sq(&self) -> Vec<f64> {
        self.qhat.iter().map(|c| c * c).collect()
    }

    /// Largest entrywise gap between the value sequences.
    pub fn distance(&self, other: &OddPotential) -> f64 {
        let d: Vec<f64> = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| a - b)
            .collect();
        max_abs(&d)
    }
}
