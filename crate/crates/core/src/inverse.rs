//! Inversion of the coefficient map `Φ` on the odd subspace.
//!
//! Newton runs in the free chart `q_1..q_k`; seeds are built in Fourier
//! coordinates. For small nondegenerate `q` the `2^k` sign flips of `q̂`
//! each lie near a distinct element of the isospectral set.

use alloc::vec::Vec;

use crate::bands::{gap_sign, BandStructure, HEIGHT_TOL};
use crate::linalg::Matrix;
use crate::lyapunov::{jacobian_phi, phi_map, DiscriminantPoly, ExpansionMatrices, PhiVector};
use crate::math::{max_abs, sinh, sqrt};
use crate::potential::{w_matrix, OddPotential};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Stop once `‖Φ(p) - target‖∞ ≤ tol_residual · max(1, ‖target‖∞)`.
    pub tol_residual: f64,
    pub max_iter: usize,
    /// Step halvings allowed per iteration.
    pub max_halvings: usize,
    /// `|det d_qΦ|` below this aborts the solve.
    pub singular_threshold: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol_residual: 1e-12,
            max_iter: 100,
            max_halvings: 20,
            singular_threshold: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonSolution {
    pub potential: OddPotential,
    pub iterations: usize,
    /// `‖Φ(p) - target‖∞`.
    pub residual: f64,
}

fn residual(p: &OddPotential, target: &PhiVector) -> f64 {
    phi_map(p).max_diff(target)
}

/// Damped Newton iteration for `Φ(p) = target` starting at `seed`.
pub fn newton_solve(
    target: &PhiVector,
    seed: &OddPotential,
    opts: &NewtonOptions,
) -> Result<NewtonSolution> {
    if target.k() != seed.k() {
        return Err(Error::LengthMismatch {
            expected: seed.k(),
            found: target.k(),
        });
    }
    let tol = opts.tol_residual * target.max_abs().max(1.0);
    let mut p = seed.clone();
    let mut res = residual(&p, target);
    for iter in 0..=opts.max_iter {
        if res <= tol {
            return Ok(NewtonSolution {
                potential: p,
                iterations: iter,
                residual: res,
            });
        }
        if iter == opts.max_iter {
            break;
        }
        let jac = jacobian_phi(&p);
        let det = jac.determinant();
        if det.abs() < opts.singular_threshold {
            return Err(Error::SingularJacobian { det });
        }
        let f: Vec<f64> = phi_map(&p)
            .0
            .iter()
            .zip(target.entries())
            .map(|(a, b)| b - a)
            .collect();
        let step = jac.solve(&f).ok_or(Error::SingularJacobian { det })?;
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let free: Vec<f64> = p
                .free()
                .iter()
                .zip(&step)
                .map(|(x, d)| x + alpha * d)
                .collect();
            let cand = OddPotential::from_free(&free);
            let r = residual(&cand, target);
            if r < res {
                accepted = Some((cand, r));
                break;
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((cand, r)) => {
                p = cand;
                res = r;
            }
            None => {
                return Err(Error::NoConvergence {
                    iterations: iter,
                    residual: res,
                })
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual: res,
    })
}

/// The outcome of one sign-flip seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedOutcome {
    /// `ν ∈ {±1}^k` applied to `q̂`.
    pub signs: Vec<f64>,
    pub result: core::result::Result<NewtonSolution, Error>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsoSet {
    pub source: OddPotential,
    /// Distinct solutions, sorted lexicographically by `q̂`.
    pub members: Vec<OddPotential>,
    /// `‖Φ(member) - Φ(source)‖∞`, aligned with `members`.
    pub residuals: Vec<f64>,
    pub seeds: Vec<SeedOutcome>,
}

impl IsoSet {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn failed_seeds(&self) -> usize {
        self.seeds.iter().filter(|s| s.result.is_err()).count()
    }

    /// Whether some member lies within `tol` of `p` (∞-norm on values).
    pub fn contains(&self, p: &OddPotential, tol: f64) -> bool {
        self.members.iter().any(|m| m.distance(p) <= tol)
    }
}

/// All `2^k` sign patterns, in binary counting order (`+` before `-`).
pub fn sign_patterns(k: usize) -> Vec<Vec<f64>> {
    (0..1usize << k)
        .map(|bits| {
            (0..k)
                .map(|i| if bits >> i & 1 == 1 { -1.0 } else { 1.0 })
                .collect()
        })
        .collect()
}

/// Dedup tolerance `1e-6 · max(1, ‖q‖)`.
pub fn dedup_tolerance(q: &OddPotential) -> f64 {
    1e-6 * q.norm().max(1.0)
}

/// Solves `Φ(p) = Φ(q)` from every sign flip of `q̂` and collects the
/// distinct solutions. Failed seeds are recorded, never fatal.
pub fn isospectral_set(q: &OddPotential, opts: &NewtonOptions) -> Result<IsoSet> {
    if let Some(i) = q.qhat().iter().position(|&c| c == 0.0) {
        return Err(Error::PredictionDegenerate { mode: i + 1 });
    }
    let target = phi_map(q);
    let seeds: Vec<SeedOutcome> = sign_patterns(q.k())
        .into_iter()
        .map(|signs| {
            let seed = q.flipped(&signs);
            let result = newton_solve(&target, &seed, opts);
            SeedOutcome { signs, result }
        })
        .collect();
    Ok(collect_members(q.clone(), &target, seeds))
}

fn collect_members(source: OddPotential, target: &PhiVector, seeds: Vec<SeedOutcome>) -> IsoSet {
    let tol = dedup_tolerance(&source);
    let mut members: Vec<OddPotential> = Vec::new();
    for s in &seeds {
        if let Ok(sol) = &s.result {
            if !members.iter().any(|m| m.distance(&sol.potential) <= tol) {
                members.push(sol.potential.clone());
            }
        }
    }
    members.sort_by(|a, b| {
        a.qhat()
            .iter()
            .zip(b.qhat())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let residuals = members.iter().map(|m| residual(m, target)).collect();
    IsoSet {
        source,
        members,
        residuals,
        seeds,
    }
}

/// Recovers one odd potential with `Φ(p) = target` and enumerates its
/// isospectral set.
///
/// The starting point comes from the quadratic model: `q̂² ≈ (Ã W)⁻¹ (target
/// - Φ⁰)`, with negative entries clamped to a small positive floor.
pub fn isospectral_from_target(target: &PhiVector, opts: &NewtonOptions) -> Result<IsoSet> {
    let k = target.k();
    if k == 0 {
        return Err(Error::InvalidPeriod(0));
    }
    let e = ExpansionMatrices::new(k);
    let aw = &e.quadratic() * &w_matrix(k);
    let rhs: Vec<f64> = target
        .entries()
        .iter()
        .zip(&e.phi0)
        .map(|(t, p)| t - p)
        .collect();
    let det = aw.determinant();
    let sq = aw.solve(&rhs).ok_or(Error::SingularJacobian { det })?;
    let floor = 1e-6 * max_abs(&sq).max(1e-12);
    let qhat: Vec<f64> = sq.iter().map(|&s| sqrt(s.max(floor))).collect();
    let seed = OddPotential::from_coords(&qhat);
    let source = newton_solve(target, &seed, opts)?.potential;
    isospectral_set(&source, opts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport {
    /// Largest coefficient difference between the two discriminants.
    pub coefficient_residual: f64,
    /// Largest band-edge difference.
    pub edge_residual: f64,
    /// Largest height difference.
    pub height_residual: f64,
    pub tol: f64,
}

impl VerifyReport {
    pub fn coefficients_match(&self) -> bool {
        self.coefficient_residual <= self.tol
    }

    pub fn edges_match(&self) -> bool {
        self.edge_residual <= self.tol
    }

    pub fn heights_match(&self) -> bool {
        self.height_residual <= self.tol
    }

    pub fn passes(&self) -> bool {
        self.coefficients_match() && self.edges_match() && self.heights_match()
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Checks the three equivalent forms of `σ(p) = σ(q)` independently.
pub fn verify_isospectral(p: &OddPotential, q: &OddPotential, tol: f64) -> VerifyReport {
    let dp = DiscriminantPoly::from_potential(p.potential());
    let dq = DiscriminantPoly::from_potential(q.potential());
    let coefficient_residual = max_diff(dp.coeffs(), dq.coeffs());
    let (edge_residual, height_residual) = match (
        BandStructure::from_potential(p.potential()),
        BandStructure::from_potential(q.potential()),
    ) {
        (Ok(a), Ok(b)) => (
            max_diff(&a.all_edges(), &b.all_edges()),
            max_diff(&a.heights, &b.heights),
        ),
        _ => (f64::INFINITY, f64::INFINITY),
    };
    VerifyReport {
        coefficient_residual,
        edge_residual,
        height_residual,
        tol,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularityReport {
    /// `det d_qΦ` in the free chart.
    pub det: f64,
    pub is_singular: bool,
}

pub fn singularity(q: &OddPotential, threshold: f64) -> SingularityReport {
    let det = jacobian_phi(q).determinant();
    SingularityReport {
        det,
        is_singular: det.abs() < threshold,
    }
}

/// Heights `h_1..h_k` and, where every gap is open, `∂h_n/∂q_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightMap {
    pub heights: Vec<f64>,
    pub jacobian: Option<Matrix>,
}

/// `h_n` for `n = 1..k`; the remaining heights mirror them.
pub fn height_map(q: &OddPotential) -> Result<HeightMap> {
    let bs = BandStructure::from_potential(q.potential())?;
    let heights = bs.heights[..q.k()].to_vec();
    let jacobian = height_jacobian(q).ok();
    Ok(HeightMap { heights, jacobian })
}

/// `∂h_n/∂q_m = s_n ∂H_n/∂q_m / (2 sinh h_n)`, from `H_n = 2 s_n cosh h_n`.
pub fn height_jacobian(q: &OddPotential) -> Result<Matrix> {
    let k = q.k();
    let bs = BandStructure::from_potential(q.potential())?;
    if let Some(i) = bs.heights[..k].iter().position(|&h| h <= HEIGHT_TOL) {
        return Err(Error::ClosedGap { band: i + 1 });
    }
    let jh = crate::bands::jacobian_h(q)?;
    Ok(Matrix::from_fn(k, k, |n, m| {
        gap_sign(2 * k, n + 1) * jh[(n, m)] / (2.0 * sinh(bs.heights[n]))
    }))
}
