//! The Lyapunov function `Δ(λ, q) = φ_{N+2}(λ, q) + θ_{N+1}(λ, q)`.
//!
//! Both fundamental solutions follow `y_{n+1} = (λ - q_n) y_n - y_{n-1}` with
//! `φ_0 = 0, φ_1 = 1` and `θ_0 = 1, θ_1 = 0`. Running the same recurrence on
//! coefficient vectors yields `Δ` as a monic polynomial of degree `N+1`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::linalg::Matrix;
use crate::math::{cos, powi, sin};
use crate::poly::{Poly, Ring};
use crate::potential::{u_matrix, OddPotential, Potential};

/// `(φ_0, …, φ_{N+2})` and `(θ_0, …, θ_{N+1})` at a point.
pub fn fundamental(lambda: f64, q: &Potential) -> (Vec<f64>, Vec<f64>) {
    let v = q.values();
    let p = v.len();
    let mut phi = vec![0.0; p + 2];
    let mut theta = vec![0.0; p + 1];
    phi[1] = 1.0;
    theta[0] = 1.0;
    for n in 1..=p {
        phi[n + 1] = (lambda - v[n - 1]) * phi[n] - phi[n - 1];
        if n < p {
            theta[n + 1] = (lambda - v[n - 1]) * theta[n] - theta[n - 1];
        }
    }
    (phi, theta)
}

pub fn eval_delta(lambda: f64, q: &Potential) -> f64 {
    eval_delta_jet(lambda, q)[0]
}

/// `[Δ, Δ', Δ'']` at `λ`, by differentiating the recurrence in `λ`.
pub fn eval_delta_jet(lambda: f64, q: &Potential) -> [f64; 3] {
    let v = q.values();
    let p = v.len();
    // Each state holds (y_{n-1}, y_n) for value, first and second derivative.
    let step = |s: &mut [[f64; 2]; 3], c: f64| {
        let [y, d1, d2] = *s;
        let y_next = c * y[1] - y[0];
        let d1_next = y[1] + c * d1[1] - d1[0];
        let d2_next = 2.0 * d1[1] + c * d2[1] - d2[0];
        *s = [[y[1], y_next], [d1[1], d1_next], [d2[1], d2_next]];
    };
    let mut phi = [[0.0, 1.0], [0.0; 2], [0.0; 2]];
    let mut theta = [[1.0, 0.0], [0.0; 2], [0.0; 2]];
    for n in 1..=p {
        let c = lambda - v[n - 1];
        step(&mut phi, c);
        if n < p {
            step(&mut theta, c);
        }
    }
    [
        phi[0][1] + theta[0][1],
        phi[1][1] + theta[1][1],
        phi[2][1] + theta[2][1],
    ]
}

/// Polynomials `φ_0..φ_{N+2}` and `θ_0..θ_{N+1}` over any coefficient ring.
pub fn fundamental_polys<T: Ring>(values: &[T]) -> (Vec<Poly<T>>, Vec<Poly<T>>) {
    let p = values.len();
    let mut phi = Vec::with_capacity(p + 2);
    let mut theta = Vec::with_capacity(p + 1);
    phi.push(Poly::zero());
    phi.push(Poly::one());
    theta.push(Poly::one());
    theta.push(Poly::zero());
    for n in 1..=p {
        let next = &phi[n].mul_shifted_identity(values[n - 1]) - &phi[n - 1];
        phi.push(next);
        if n < p {
            let next = &theta[n].mul_shifted_identity(values[n - 1]) - &theta[n - 1];
            theta.push(next);
        }
    }
    (phi, theta)
}

/// `Δ(·, q)` over any coefficient ring, exactly `N+2` coefficients long.
pub fn delta_poly_generic<T: Ring>(values: &[T]) -> Poly<T> {
    let p = values.len();
    let (phi, theta) = fundamental_polys(values);
    (&phi[p + 1] + &theta[p]).padded(p + 1)
}

/// `Δ(·, q) - Δ(·, 0)`, padded to `N+2` coefficients.
///
/// The recurrence is run on the deviations `δy_n = y_n(q) - y_n(0)`, so
/// the result keeps relative accuracy when `q` is small instead of losing
/// it to the cancellation against the `O(1)` Chebyshev coefficients.
pub fn delta_deviation_poly(q: &Potential) -> Poly<f64> {
    let v = q.values();
    let p = v.len();
    let run = |y0: Poly<f64>, y1: Poly<f64>, last: usize| -> Poly<f64> {
        // (y⁰_{n-1}, y⁰_n) and (δy_{n-1}, δy_n)
        let (mut a0, mut a1) = (y0, y1);
        let (mut d0, mut d1) = (Poly::<f64>::zero(), Poly::<f64>::zero());
        for n in 1..last {
            let total = &a1 + &d1;
            let d_next = &(&d1.mul_shifted_identity(0.0) - &d0) - &total.scale(v[n - 1]);
            let a_next = &a1.mul_shifted_identity(0.0) - &a0;
            a0 = a1;
            a1 = a_next;
            d0 = d1;
            d1 = d_next;
        }
        d1
    };
    let dphi = run(Poly::zero(), Poly::one(), p + 1);
    let dtheta = run(Poly::one(), Poly::zero(), p);
    (&dphi + &dtheta).padded(p + 1)
}

/// `Δ(λ, q) - Δ(λ, 0)` at a point, by the same deviation recurrence.
pub fn eval_delta_deviation(lambda: f64, q: &Potential) -> f64 {
    let v = q.values();
    let p = v.len();
    let run = |y0: f64, y1: f64, last: usize| -> f64 {
        let (mut a0, mut a1, mut d0, mut d1) = (y0, y1, 0.0, 0.0);
        for n in 1..last {
            let d_next = lambda * d1 - d0 - v[n - 1] * (a1 + d1);
            let a_next = lambda * a1 - a0;
            a0 = a1;
            a1 = a_next;
            d0 = d1;
            d1 = d_next;
        }
        d1
    };
    run(0.0, 1.0, p + 1) + run(1.0, 0.0, p)
}

/// Monic coefficients of `Δ(·, q)`, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminantPoly {
    poly: Poly<f64>,
}

impl DiscriminantPoly {
    pub fn from_potential(q: &Potential) -> Self {
        DiscriminantPoly {
            poly: delta_poly_generic(q.values()),
        }
    }

    /// Wraps raw coefficients; `None` unless there are at least 3 and the
    /// leading one is 1 within 1e-10.
    pub fn from_coeffs(coeffs: Vec<f64>) -> Option<Self> {
        let lead = *coeffs.last()?;
        if coeffs.len() < 3 || (lead - 1.0).abs() > 1e-10 {
            return None;
        }
        Some(DiscriminantPoly {
            poly: Poly::from_coeffs(coeffs),
        })
    }

    pub fn coeffs(&self) -> &[f64] {
        self.poly.coeffs()
    }

    pub fn as_poly(&self) -> &Poly<f64> {
        &self.poly
    }

    /// `N + 1`.
    pub fn period(&self) -> usize {
        self.poly.coeffs().len() - 1
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.poly.eval(lambda)
    }

    /// `[Δ, Δ', Δ'']` by Horner's scheme.
    pub fn eval_jet(&self, lambda: f64) -> [f64; 3] {
        let (mut p0, mut p1, mut p2) = (0.0, 0.0, 0.0);
        for &c in self.poly.coeffs().iter().rev() {
            p2 = p2 * lambda + 2.0 * p1;
            p1 = p1 * lambda + p0;
            p0 = p0 * lambda + c;
        }
        [p0, p1, p2]
    }

    /// Largest odd-degree coefficient; zero for odd potentials.
    pub fn odd_part(&self) -> f64 {
        self.coeffs()
            .iter()
            .skip(1)
            .step_by(2)
            .fold(0.0, |m, c| m.max(c.abs()))
    }

    /// The coefficients of `λ^{2k-2}, λ^{2k-4}, …, λ^0` for even period `2k`.
    ///
    /// # Panics
    /// If the period is odd.
    pub fn phi_vector(&self) -> PhiVector {
        let p = self.period();
        assert!(p.is_multiple_of(2), "Φ needs an even period");
        let k = p / 2;
        PhiVector((1..=k).map(|n| self.poly.coeff(2 * k - 2 * n)).collect())
    }
}

/// `Φ = (φ_1, φ_3, …, φ_{2k-1})`, where `φ_{2n-1}` is the coefficient of
/// `λ^{2k-2n}` in `Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiVector(pub Vec<f64>);

impl PhiVector {
    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// The even monic polynomial with these nontrivial coefficients.
    pub fn to_discriminant(&self) -> DiscriminantPoly {
        let k = self.k();
        let mut coeffs = vec![0.0; 2 * k + 1];
        coeffs[2 * k] = 1.0;
        for (n, &c) in self.0.iter().enumerate() {
            coeffs[2 * k - 2 * (n + 1)] = c;
        }
        DiscriminantPoly {
            poly: Poly::from_coeffs(coeffs),
        }
    }

    pub fn max_diff(&self, other: &PhiVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn max_abs(&self) -> f64 {
        crate::math::max_abs(&self.0)
    }
}

pub fn phi_map(q: &OddPotential) -> PhiVector {
    DiscriminantPoly::from_potential(q.potential()).phi_vector()
}

/// `∂φ_{2n-1} / ∂q_m` in the free chart `q_1..q_k`.
///
/// Moving `q_m` moves `q_{2k+1-m}` the opposite way, so the recurrence is
/// differentiated with `∂q_j = +1` at `j = m` and `-1` at `j = 2k+1-m`:
/// `∂y_{j+1} = (λ - q_j) ∂y_j - ∂y_{j-1} - (∂q_j) y_j`.
pub fn jacobian_phi(q: &OddPotential) -> Matrix {
    let k = q.k();
    let p = 2 * k;
    let v = q.values();
    let (phi, theta) = fundamental_polys(v);
    let mut jac = Matrix::zeros(k, k);
    for m in 1..=k {
        let dq = |j: usize| -> f64 {
            if j == m {
                1.0
            } else if j == p + 1 - m {
                -1.0
            } else {
                0.0
            }
        };
        let run = |y: &[Poly<f64>], last: usize| -> Poly<f64> {
            let mut prev = Poly::zero();
            let mut cur = Poly::zero();
            for j in 1..last {
                let mut next = &cur.mul_shifted_identity(v[j - 1]) - &prev;
                let s = dq(j);
                if s != 0.0 {
                    next = &next - &y[j].scale(s);
                }
                prev = cur;
                cur = next;
            }
            cur
        };
        let d_delta = &run(&phi, p + 1) + &run(&theta, p);
        for n in 1..=k {
            jac[(n - 1, m - 1)] = d_delta.coeff(2 * k - 2 * n);
        }
    }
    jac
}

/// `∂Φ / ∂q̂`: the free-chart Jacobian composed with `∂q / ∂q̂ = U / 2`.
pub fn jacobian_phi_qhat(q: &OddPotential) -> Matrix {
    &jacobian_phi(q) * &u_matrix(q.k()).scale(0.5)
}

/// `φ⁰_n` for the zero potential (a Chebyshev polynomial of the second kind
/// in `λ/2`).
pub fn chebyshev_fundamental(n: usize) -> Poly<i64> {
    let mut prev = Poly::zero();
    let mut cur = Poly::one();
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &cur.mul_shifted_identity(0) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn binomial(n: u32, r: u32) -> i128 {
    (0..r).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// `R_{2m}^{2k} = 2k/(k+m) · C(k+m, 2m)` for `m = 0..k`.
pub fn r_coefficients(k: usize) -> Vec<i128> {
    (0..=k as u32)
        .map(|m| {
            let num = 2 * k as i128 * binomial(k as u32 + m, 2 * m);
            let den = (k as u32 + m) as i128;
            debug_assert_eq!(num % den, 0);
            num / den
        })
        .collect()
}

/// `Δ(λ, 0) = Σ_m (-1)^{m+k} R_{2m} λ^{2m}`, exactly.
pub fn delta_zero_exact(k: usize) -> Poly<i128> {
    let r = r_coefficients(k);
    let mut coeffs = vec![0i128; 2 * k + 1];
    for (m, &rm) in r.iter().enumerate() {
        coeffs[2 * m] = if (m + k).is_multiple_of(2) { rm } else { -rm };
    }
    Poly::from_coeffs(coeffs)
}

/// `λ_n⁰ = -2cos(πn/2k)` for `n = 1..2k-1`.
pub fn unperturbed_critical_points(k: usize) -> Vec<f64> {
    (1..2 * k)
        .map(|n| -2.0 * cos(PI * n as f64 / (2 * k) as f64))
        .collect()
}

/// `Δ''(λ_n⁰, 0) = -2k²(-1)^n / sin²(πn/2k)`, `n` 1-based.
pub fn unperturbed_second_derivative(k: usize, n: usize) -> f64 {
    let s = sin(PI * n as f64 / (2 * k) as f64);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    -2.0 * (k * k) as f64 * sign / (s * s)
}

/// `Λ(λ) = (λ^{2k-2}, λ^{2k-4}, …, 1)`.
pub fn lambda_vector(k: usize, lambda: f64) -> Vec<f64> {
    (1..=k).map(|n| powi(lambda, 2 * k - 2 * n)).collect()
}

/// Constant data of the small-`q` expansion `Φ(q) = Φ⁰ + Ã f(q) + O(‖q‖⁴)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionMatrices {
    pub k: usize,
    /// Column `m` holds the coefficients of `φ⁰_m φ⁰_{2k-m}` at degrees
    /// `2k-2, 2k-4, …, 0`. Unimodular.
    pub a: Matrix,
    /// `Φ(0)`, with `Φ⁰_n = (-1)^n R_{2(k-n)}`.
    pub phi0: Vec<f64>,
    /// `R_{2m}^{2k}` for `m = 0..k`.
    pub r: Vec<i128>,
}

impl ExpansionMatrices {
    /// # Panics
    /// If `k == 0`.
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "k must be positive");
        let mut a = Matrix::zeros(k, k);
        for m in 1..=k {
            let prod = &chebyshev_fundamental(m) * &chebyshev_fundamental(2 * k - m);
            for n in 1..=k {
                a[(n - 1, m - 1)] = prod.coeff(2 * k - 2 * n) as f64;
            }
        }
        let r = r_coefficients(k);
        let phi0 = (1..=k)
            .map(|n| {
                let v = r[k - n] as f64;
                if n % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        ExpansionMatrices { k, a, phi0, r }
    }

    /// `Ã = A · diag(1, …, 1, 1/2)`, the matrix that multiplies `f(q)` in the
    /// quadratic term.
    ///
    /// `f_k` pairs each site with its antipode, so every product
    /// `q_i q_{i+k}` appears twice in `f_k` but once in `Δ`; the other `f_s`
    /// count each unordered pair once from each side.
    pub fn quadratic(&self) -> Matrix {
        let mut a = self.a.clone();
        let last = self.k - 1;
        for n in 0..self.k {
            a[(n, last)] *= 0.5;
        }
        a
    }

    /// `Φ⁰ + Ã f(q)`.
    pub fn quadratic_phi(&self, q: &OddPotential) -> PhiVector {
        let af = self.quadratic().mul_vec(&q.f_vector());
        PhiVector(self.phi0.iter().zip(af).map(|(p, x)| p + x).collect())
    }
}
