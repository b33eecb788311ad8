//! Small-potential asymptotics on the odd subspace and the harness that
//! measures their convergence orders.
//!
//! For `q` odd with Fourier coordinates `q̂` and `n = 1..k`:
//!
//! * `(λ_n^±(q) - λ_n⁰)² ≈ 2^{δ_{k,n}}/(4k) · q̂_n²`, remainder `O(‖q‖³)`;
//! * `h_n(q)² ≈ 2^{δ_{k,n}} k / (4 sin²(πn/2k)) · q̂_n²`, remainder `O(‖q‖⁴)`.
//!
//! Both follow from `Φ(q) = Φ⁰ + Ã W q̂² + O(‖q‖⁴)` and the identity
//! `(-2/Δ''(λ_n⁰,0)) Λ(λ_n⁰)ᵀ Ã W = 2^{δ_{k,n}}/(4k) e_n`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::bands::BandStructure;
use crate::linalg::Matrix;
use crate::lyapunov::{
    delta_deviation_poly, eval_delta, eval_delta_deviation, jacobian_phi, lambda_vector, phi_map,
    unperturbed_critical_points, unperturbed_second_derivative, DiscriminantPoly,
    ExpansionMatrices,
};
use crate::math::{cos, log10, powi, sin};
use crate::potential::{u_matrix, w_matrix, OddPotential, Potential};
use crate::{Error, Result};

/// Errors below this are treated as roundoff when fitting orders.
pub const NOISE_FLOOR: f64 = 1e-13;
/// Largest admissible scale in a convergence grid.
pub const MAX_SCALE: f64 = 0.3;
/// Number of nodes in the λ-grid used for function comparisons.
pub const LAMBDA_GRID_POINTS: usize = 257;

fn kronecker_weight(k: usize, n: usize) -> f64 {
    if n == k {
        2.0
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    /// 1-based gap index.
    pub n: usize,
    pub edge_shift_sq: f64,
    pub height_sq: f64,
}

/// Closed-form predictions for gaps `n = 1..k`; the rest mirror by symmetry.
pub fn predict(q: &OddPotential) -> Vec<Prediction> {
    let k = q.k();
    q.qhat()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let n = i + 1;
            let w = kronecker_weight(k, n);
            let s = sin(PI * n as f64 / (2 * k) as f64);
            Prediction {
                n,
                edge_shift_sq: w / (4 * k) as f64 * c * c,
                height_sq: w * k as f64 / (4.0 * s * s) * c * c,
            }
        })
        .collect()
}

/// Rows `(-2/Δ''(λ_n⁰,0)) Λ(λ_n⁰)ᵀ Ã W` for `n = 1..k`.
pub fn identity_rows(k: usize) -> Matrix {
    let e = ExpansionMatrices::new(k);
    let aw = &e.quadratic() * &w_matrix(k);
    let nodes = unperturbed_critical_points(k);
    let mut out = Matrix::zeros(k, k);
    for n in 1..=k {
        let scale = -2.0 / unperturbed_second_derivative(k, n);
        let row = aw.vec_mul(&lambda_vector(k, nodes[n - 1]));
        for (j, v) in row.iter().enumerate() {
            out[(n - 1, j)] = scale * v;
        }
    }
    out
}

/// Max deviation of [`identity_rows`] from `diag(2^{δ_{k,n}}/(4k))`.
pub fn identity_residual(k: usize) -> f64 {
    let rows = identity_rows(k);
    let target = Matrix::from_fn(k, k, |i, j| {
        if i == j {
            kronecker_weight(k, i + 1) / (4 * k) as f64
        } else {
            0.0
        }
    });
    rows.sub(&target).max_abs()
}

/// Edge-shift predictions obtained as `identity_rows(k) · q̂²`.
pub fn predict_edge_shift_via_identity(q: &OddPotential) -> Vec<f64> {
    identity_rows(q.k()).mul_vec(&q.qhat_sq())
}

/// `Δ_M(·, q) = Δ(·, 0) + (Ã f(q), Λ(·))`.
pub fn model_delta_poly(q: &OddPotential) -> DiscriminantPoly {
    let k = q.k();
    let e = ExpansionMatrices::new(k);
    let mut coeffs: Vec<f64> = crate::lyapunov::delta_zero_exact(k)
        .into_coeffs()
        .into_iter()
        .map(|c| c as f64)
        .collect();
    let af = e.quadratic().mul_vec(&q.f_vector());
    for (n, v) in af.iter().enumerate() {
        coeffs[2 * k - 2 * (n + 1)] += v;
    }
    DiscriminantPoly::from_coeffs(coeffs).expect("monic")
}

pub fn model_delta(lambda: f64, q: &OddPotential) -> f64 {
    let k = q.k();
    let e = ExpansionMatrices::new(k);
    let af = e.quadratic().mul_vec(&q.f_vector());
    let lv = lambda_vector(k, lambda);
    let base = eval_delta(lambda, &Potential::zero(2 * k).expect("period >= 2"));
    base + af.iter().zip(&lv).map(|(a, b)| a * b).sum::<f64>()
}

/// `max_n |Φ(q) - Φ⁰ - Ã f(q)|`, formed from the deviation polynomial so
/// the `O(‖q‖⁴)` remainder is not swamped by roundoff.
pub fn model_residual(q: &OddPotential) -> f64 {
    let k = q.k();
    let dev = delta_deviation_poly(q.potential());
    let af = ExpansionMatrices::new(k).quadratic().mul_vec(&q.f_vector());
    (1..=k)
        .map(|n| (dev.coeff(2 * k - 2 * n) - af[n - 1]).abs())
        .fold(0.0, f64::max)
}

/// `n` Chebyshev–Gauss nodes on `[a, b]`, ascending.
pub fn chebyshev_grid(n: usize, a: f64, b: f64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let x = -cos(PI * (2 * i + 1) as f64 / (2 * n) as f64);
            0.5 * (a + b) + 0.5 * (b - a) * x
        })
        .collect()
}

fn lambda_grid() -> Vec<f64> {
    chebyshev_grid(LAMBDA_GRID_POINTS, -2.5, 2.5)
}

/// `max_λ |Δ_M(λ, ν·q) - Δ_M(λ, q)|` over the λ-grid.
pub fn sign_flip_model_invariance(q: &OddPotential, signs: &[f64]) -> f64 {
    let p = q.flipped(signs);
    let (a, b) = (model_delta_poly(q), model_delta_poly(&p));
    lambda_grid()
        .into_iter()
        .map(|x| (a.eval(x) - b.eval(x)).abs())
        .fold(0.0, f64::max)
}

/// `max_λ |Δ(λ, ν·q) - Δ(λ, q)|` over the λ-grid; nonzero but `O(‖q‖⁴)`.
pub fn sign_flip_delta_change(q: &OddPotential, signs: &[f64]) -> f64 {
    let p = q.flipped(signs);
    lambda_grid()
        .into_iter()
        .map(|x| {
            (eval_delta_deviation(x, q.potential()) - eval_delta_deviation(x, p.potential())).abs()
        })
        .fold(0.0, f64::max)
}

/// `2 Ã W diag(q̂) Uᵀ`, the leading term of `d_qΦ`.
pub fn jacobian_leading_term(q: &OddPotential) -> Matrix {
    let k = q.k();
    let aw = &ExpansionMatrices::new(k).quadratic() * &w_matrix(k);
    let d = Matrix::diagonal(q.qhat());
    let ut = u_matrix(k).transpose();
    (&(&aw * &d) * &ut).scale(2.0)
}

/// `max |d_qΦ(q) - 2 Ã W diag(q̂) Uᵀ|`.
pub fn jacobian_factorization_residual(q: &OddPotential) -> f64 {
    jacobian_phi(q).sub(&jacobian_leading_term(q)).max_abs()
}

/// `max_n |Δ(λ_n⁰, q) - (-1)^n (2 + ĥ_n²)|` with `ĥ_n²` the predicted height.
pub fn unperturbed_value_residual(q: &OddPotential) -> f64 {
    let k = q.k();
    let nodes = unperturbed_critical_points(k);
    predict(q)
        .iter()
        .map(|pr| {
            let s = if pr.n % 2 == 0 { 1.0 } else { -1.0 };
            // Δ(λ_n⁰, 0) = 2s exactly, so compare deviations.
            (eval_delta_deviation(nodes[pr.n - 1], q.potential()) - s * pr.height_sq).abs()
        })
        .fold(0.0, f64::max)
}

/// Quantities tracked by [`convergence_study`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantity {
    HeightSq,
    EdgeShiftSqMinus,
    EdgeShiftSqPlus,
    /// `Δ(λ_n⁰, tq) - Δ(λ_n⁰, 0)` against `(-1)^n ĥ_n²`.
    DeltaAtUnperturbed,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [
        Quantity::HeightSq,
        Quantity::EdgeShiftSqMinus,
        Quantity::EdgeShiftSqPlus,
        Quantity::DeltaAtUnperturbed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::HeightSq => "height_sq",
            Quantity::EdgeShiftSqMinus => "edge_shift_sq_minus",
            Quantity::EdgeShiftSqPlus => "edge_shift_sq_plus",
            Quantity::DeltaAtUnperturbed => "delta_at_unperturbed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub t: f64,
    pub quantity: Quantity,
    /// 1-based gap index.
    pub n: usize,
    pub exact: f64,
    pub predicted: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedOrder {
    pub quantity: Quantity,
    pub n: usize,
    /// Slope of `log10(rel_error)` against `log10(t)`; `None` with fewer
    /// than two points above the noise floor.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub t_grid: Vec<f64>,
    pub rows: Vec<ConvergenceRow>,
    pub orders: Vec<FittedOrder>,
    /// Order of `max |Φ(tq) - Φ⁰ - Ã f(tq)|`.
    pub model_order: Option<f64>,
    /// Order of the Jacobian factorization residual.
    pub jacobian_order: Option<f64>,
}

impl ConvergenceReport {
    /// Worst (smallest) fitted order for a quantity across gaps.
    pub fn min_order(&self, quantity: Quantity) -> Option<f64> {
        self.orders
            .iter()
            .filter(|o| o.quantity == quantity)
            .map(|o| o.order)
            .try_fold(f64::INFINITY, |m, o| o.map(|o| m.min(o)))
    }
}

/// `n` points from `a` down to `b`, geometrically spaced.
pub fn geometric_grid(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || a.is_nan() || b.is_nan() || a <= 0.0 || b <= 0.0 {
        return Err(Error::InvalidGrid);
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let ratio = log10(b / a) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n)
        .map(|i| {
            if i == n - 1 {
                b
            } else {
                a * libm::pow(10.0, ratio * i as f64)
            }
        })
        .collect();
    validate_grid(&grid)?;
    Ok(grid)
}

pub fn default_grid() -> Vec<f64> {
    geometric_grid(1e-1, 1e-3, 9).expect("valid default grid")
}

pub fn validate_grid(grid: &[f64]) -> Result<()> {
    let in_range = grid.iter().all(|&t| t > 0.0 && t <= MAX_SCALE);
    let decreasing = grid.windows(2).all(|w| w[1] < w[0]);
    if grid.is_empty() || !in_range || !decreasing {
        return Err(Error::InvalidGrid);
    }
    Ok(())
}

/// Least-squares slope of `log10(err)` against `log10(t)`, ignoring errors
/// below [`NOISE_FLOOR`].
pub fn fit_order(t: &[f64], err: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(err)
        .filter(|(_, &e)| e.is_finite() && e >= NOISE_FLOOR)
        .map(|(&t, &e)| (log10(t), log10(e)))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| powi(p.0 - mx, 2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

fn rel_error(exact: f64, predicted: f64) -> f64 {
    if predicted == 0.0 {
        (exact - predicted).abs()
    } else {
        ((exact - predicted) / predicted).abs()
    }
}

/// Compares exact spectral data of `t·q` with the predictions over a grid.
pub fn convergence_study(q: &OddPotential, t_grid: &[f64]) -> Result<ConvergenceReport> {
    validate_grid(t_grid)?;
    if let Some(i) = q.qhat().iter().position(|&c| c == 0.0) {
        return Err(Error::PredictionDegenerate { mode: i + 1 });
    }
    let k = q.k();
    let nodes = unperturbed_critical_points(k);
    let mut rows = Vec::new();
    let mut model_err = Vec::with_capacity(t_grid.len());
    let mut jac_err = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let qt = q.scaled(t);
        let bs = BandStructure::from_potential(qt.potential())?;
        for pr in predict(&qt) {
            let i = pr.n - 1;
            let s = if pr.n % 2 == 0 { 1.0 } else { -1.0 };
            let h = bs.heights[i];
            let shift_minus = bs.edges_minus[i] - nodes[i];
            let shift_plus = bs.edges_plus[i] - nodes[i];
            let dev = eval_delta_deviation(nodes[i], qt.potential());
            for (quantity, exact, predicted) in [
                (Quantity::HeightSq, h * h, pr.height_sq),
                (
                    Quantity::EdgeShiftSqMinus,
                    shift_minus * shift_minus,
                    pr.edge_shift_sq,
                ),
                (
                    Quantity::EdgeShiftSqPlus,
                    shift_plus * shift_plus,
                    pr.edge_shift_sq,
                ),
                (Quantity::DeltaAtUnperturbed, dev, s * pr.height_sq),
            ] {
                rows.push(ConvergenceRow {
                    t,
                    quantity,
                    n: pr.n,
                    exact,
                    predicted,
                    rel_error: rel_error(exact, predicted),
                });
            }
        }
        model_err.push(model_residual(&qt));
        jac_err.push(jacobian_factorization_residual(&qt));
    }
    let mut orders = Vec::new();
    for quantity in Quantity::ALL {
        for n in 1..=k {
            let errs: Vec<f64> = t_grid
                .iter()
                .map(|&t| {
                    rows.iter()
                        .find(|r| r.t == t && r.quantity == quantity && r.n == n)
                        .map(|r| r.rel_error)
                        .unwrap_or(f64::NAN)
                })
                .collect();
            orders.push(FittedOrder {
                quantity,
                n,
                order: fit_order(t_grid, &errs),
            });
        }
    }
    Ok(ConvergenceReport {
        t_grid: t_grid.to_vec(),
        rows,
        orders,
        model_order: fit_order(t_grid, &model_err),
        jacobian_order: fit_order(t_grid, &jac_err),
    })
}

/// `Φ(q)` next to its quadratic model, for reporting.
pub fn phi_with_model(q: &OddPotential) -> (Vec<f64>, Vec<f64>) {
    let e = ExpansionMatrices::new(q.k());
    (phi_map(q).0, e.quadratic_phi(q).0)
}
