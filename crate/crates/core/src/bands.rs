//! Band edges, critical points and gap heights.
//!
//! Band `n` (`n = 0..N`) is `[λ_n^+, λ_{n+1}^-]` and gap `n` (`n = 1..N`)
//! is `(λ_n^-, λ_n^+)`, with `λ_0^+` and `λ_{N+1}^-` the outer edges. The
//! critical point `λ_n` is the zero of `Δ'` in the closure of gap `n`, and
//! with `s_n = (-1)^{N+1-n}` the height is
//! `h_n = arccosh(s_n Δ(λ_n) / 2)`.

use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::lyapunov::{eval_delta_jet, jacobian_phi, DiscriminantPoly};
use crate::math::{acosh_near_one, powi};
use crate::potential::{OddPotential, Potential};
use crate::roots::{bisect, cauchy_bound, real_roots, DEFAULT_ROOT_TOL};
use crate::{Error, Result};

/// Gaps narrower than this are treated as closed.
pub const CLOSED_GAP_TOL: f64 = 1e-8;
/// A gap counts as open when its height exceeds this.
pub const HEIGHT_TOL: f64 = 1e-9;
/// Slack allowed in `s_n Δ(λ_n) >= 2` before the sign pattern is rejected.
pub const SIGN_PATTERN_SLACK: f64 = 1e-6;
/// `|Δ''(λ_n)|` below this marks a degenerate critical point.
pub const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct BandStructure {
    /// `λ_0^+`.
    pub lower_edge: f64,
    /// `λ_{N+1}^-`.
    pub upper_edge: f64,
    /// `λ_n^-` for `n = 1..N`.
    pub edges_minus: Vec<f64>,
    /// `λ_n^+` for `n = 1..N`.
    pub edges_plus: Vec<f64>,
    /// `λ_n` for `n = 1..N`.
    pub critical: Vec<f64>,
    /// `h_n` for `n = 1..N`.
    pub heights: Vec<f64>,
    /// `H_n = Δ(λ_n)` for `n = 1..N`.
    pub h_values: Vec<f64>,
}

/// `s_n = (-1)^{N+1-n}` for period `p = N+1`.
pub fn gap_sign(p: usize, n: usize) -> f64 {
    if (p - n).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

struct Source<'a> {
    poly: DiscriminantPoly,
    jet: &'a dyn Fn(f64) -> [f64; 3],
}

impl BandStructure {
    /// Evaluates `Δ` through the transfer recurrence, which is better
    /// conditioned near the spectrum than Horner on the expanded polynomial.
    pub fn from_potential(q: &Potential) -> Result<Self> {
        Self::from_potential_with_tol(q, DEFAULT_ROOT_TOL)
    }

    pub fn from_potential_with_tol(q: &Potential, tol: f64) -> Result<Self> {
        let jet = |x: f64| eval_delta_jet(x, q);
        Self::compute(
            Source {
                poly: DiscriminantPoly::from_potential(q),
                jet: &jet,
            },
            tol,
        )
    }

    pub fn from_poly(p: &DiscriminantPoly) -> Result<Self> {
        Self::from_poly_with_tol(p, DEFAULT_ROOT_TOL)
    }

    pub fn from_poly_with_tol(p: &DiscriminantPoly, tol: f64) -> Result<Self> {
        let jet = |x: f64| p.eval_jet(x);
        Self::compute(
            Source {
                poly: p.clone(),
                jet: &jet,
            },
            tol,
        )
    }

    fn compute(src: Source<'_>, tol: f64) -> Result<Self> {
        let critical = critical_points_with(&src, tol)?;
        let p = src.poly.period();
        let n_gaps = p - 1;
        let value = |x: f64| (src.jet)(x)[0];

        let h_values: Vec<f64> = critical.iter().map(|&c| value(c)).collect();
        let mut heights = Vec::with_capacity(n_gaps);
        for (i, &h) in h_values.iter().enumerate() {
            let n = i + 1;
            let x = gap_sign(p, n) * h;
            if x < 2.0 - SIGN_PATTERN_SLACK {
                return Err(Error::SignPatternViolated { band: n, value: h });
            }
            heights.push(acosh_near_one(0.5 * x));
        }

        let bound = outer_bound(&src.poly);

        let mut nodes = Vec::with_capacity(p + 1);
        nodes.push(-bound);
        nodes.extend(critical.iter().copied());
        nodes.push(bound);

        // On the monotone segment [nodes[n], nodes[n+1]] (band n) Δ runs
        // from 2 s_n to -2 s_n.
        let mut lower = Vec::with_capacity(p);
        let mut upper = Vec::with_capacity(p);
        for n in 0..p {
            let s = gap_sign(p, n);
            let (a, b) = (nodes[n], nodes[n + 1]);
            lower.push(bisect(|x| value(x) - 2.0 * s, a, b, tol)?);
            upper.push(bisect(|x| value(x) + 2.0 * s, a, b, tol)?);
        }

        let mut edges_minus: Vec<f64> = upper[..n_gaps].to_vec();
        let mut edges_plus: Vec<f64> = lower[1..].to_vec();
        for i in 0..n_gaps {
            if edges_plus[i] - edges_minus[i] <= CLOSED_GAP_TOL {
                edges_minus[i] = critical[i];
                edges_plus[i] = critical[i];
                heights[i] = 0.0;
            }
        }

        Ok(BandStructure {
            lower_edge: lower[0],
            upper_edge: upper[n_gaps],
            edges_minus,
            edges_plus,
            critical,
            heights,
            h_values,
        })
    }

    /// `N`.
    pub fn gap_count(&self) -> usize {
        self.critical.len()
    }

    /// `[λ_0^+, λ_1^-, λ_1^+, …, λ_N^+, λ_{N+1}^-]`.
    pub fn all_edges(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.gap_count() + 2);
        out.push(self.lower_edge);
        for (m, p) in self.edges_minus.iter().zip(&self.edges_plus) {
            out.push(*m);
            out.push(*p);
        }
        out.push(self.upper_edge);
        out
    }

    /// The `N+1` closed bands.
    pub fn bands(&self) -> Vec<(f64, f64)> {
        self.all_edges().chunks(2).map(|w| (w[0], w[1])).collect()
    }

    /// The `N` gaps, empty when `λ_n^- = λ_n^+`.
    pub fn gaps(&self) -> Vec<(f64, f64)> {
        self.edges_minus
            .iter()
            .zip(&self.edges_plus)
            .map(|(a, b)| (*a, *b))
            .collect()
    }

    /// Gap `n` (1-based) is open.
    pub fn is_open(&self, n: usize) -> bool {
        self.heights[n - 1] > HEIGHT_TOL
    }
}

/// Beyond `±bound`, `|Δ| > 2`: the Cauchy bound of `Δ ∓ 2`.
fn outer_bound(p: &DiscriminantPoly) -> f64 {
    let c = p.coeffs();
    let d = c.len() - 1;
    let m = c[1..d].iter().fold(c[0].abs() + 2.0, |m, x| m.max(x.abs()));
    1.0 + m
}

fn critical_points_with(src: &Source<'_>, tol: f64) -> Result<Vec<f64>> {
    let p = src.poly.period();
    let d1 = src.poly.as_poly().derivative();
    // Roots of Δ'' separate those of Δ'; the latter are then refined on the
    // source's own derivative.
    let separators = real_roots(&d1.derivative(), tol)?;
    let bound = cauchy_bound(&d1);
    let slope = |x: f64| (src.jet)(x)[1];
    let roots = crate::roots::real_roots_between(slope, &separators, bound, tol)?;
    if roots.len() != p - 1 {
        return Err(Error::RootCountMismatch {
            expected: p - 1,
            found: roots.len(),
        });
    }
    Ok(roots)
}

/// The `N` real zeros of `Δ'`, ascending.
pub fn critical_points(p: &DiscriminantPoly) -> Result<Vec<f64>> {
    let jet = |x: f64| p.eval_jet(x);
    critical_points_with(
        &Source {
            poly: p.clone(),
            jet: &jet,
        },
        DEFAULT_ROOT_TOL,
    )
}

/// `∂H_n / ∂q_m` for `n, m = 1..k` in the free chart, as `V(λ_1..λ_k) · d_qΦ`.
///
/// Moving `q` moves `λ_n` too, but that term carries `Δ'(λ_n) = 0`.
pub fn jacobian_h(q: &OddPotential) -> Result<Matrix> {
    let bs = BandStructure::from_potential(q.potential())?;
    let k = q.k();
    let nodes = &bs.critical[..k];
    for (i, &c) in nodes.iter().enumerate() {
        if eval_delta_jet(c, q.potential())[2].abs() < DEGENERATE_TOL {
            return Err(Error::DegenerateCritical { band: i + 1 });
        }
    }
    Ok(&vandermonde(nodes) * &jacobian_phi(q))
}

/// `V(a)` with rows `(a_n^{2(k-1)}, a_n^{2(k-2)}, …, 1)`.
pub fn vandermonde(a: &[f64]) -> Matrix {
    let k = a.len();
    Matrix::from_fn(k, k, |n, j| powi(a[n], 2 * (k - 1 - j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn k1_edges() {
        let q = Potential::new(vec![1.0, -1.0]).unwrap();
        let bs = BandStructure::from_potential(&q).unwrap();
        let expected = [-(5.0f64.sqrt()), -1.0, 1.0, 5.0f64.sqrt()];
        for (e, x) in bs.all_edges().iter().zip(expected) {
            assert!((e - x).abs() < 1e-12, "{e} vs {x}");
        }
        assert!((bs.h_values[0] + 3.0).abs() < 1e-14);
        assert!((bs.heights[0] - 1.5f64.acosh()).abs() < 1e-12);
    }

    #[test]
    fn zero_potential_closed_gaps() {
        let q = Potential::zero(4).unwrap();
        let bs = BandStructure::from_potential(&q).unwrap();
        let s2 = 2.0f64.sqrt();
        for (c, x) in bs.critical.iter().zip([-s2, 0.0, s2]) {
            assert!((c - x).abs() < 1e-12);
        }
        assert!(bs.heights.iter().all(|&h| h == 0.0));
        assert!((bs.lower_edge + 2.0).abs() < 1e-12 && (bs.upper_edge - 2.0).abs() < 1e-12);
    }

    #[test]
    fn vandermonde_rows() {
        let v = vandermonde(&[2.0, 3.0]);
        assert_eq!(
            v,
            Matrix::from_fn(2, 2, |i, j| [[4.0, 1.0], [9.0, 1.0]][i][j])
        );
    }
}
