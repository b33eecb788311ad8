//! Dispatch from a validated job to the library and into a report.

use isospec::asymptotics::{convergence_study, identity_residual, model_residual, predict};
use isospec::bands::BandStructure;
use isospec::combinatorial::delta_combinatorial;
use isospec::inverse::{
    height_jacobian, isospectral_from_target, isospectral_set, singularity, verify_isospectral,
    IsoSet,
};
use isospec::lyapunov::{eval_delta, phi_map};
use isospec::potential::w_matrix;
use isospec::{DiscriminantPoly, Error, ExpansionMatrices, OddPotential, Potential};
use serde::Serialize;

use crate::job::{Command, Format, JobSpec, PotentialSpec};
use crate::report::{nums, rows, to_csv, to_json, CsvRow, Num};
use crate::CliError;

/// Tolerance for the isospectrality check attached to every member.
pub const VERIFY_TOL: f64 = 1e-8;

/// Largest `k` covered by the built-in identity suite.
pub const SUITE_MAX_K: usize = 8;

pub fn run(spec: &JobSpec) -> Result<String, CliError> {
    if spec.format == Format::Csv && spec.command != Command::Asymptotics {
        return Err(CliError::Malformed(format!(
            "csv output is only available for asymptotics, not {}",
            spec.command.name()
        )));
    }
    let name = spec.command.name();
    match spec.command {
        Command::Bands => to_json(name, bands(spec)?),
        Command::Heights => to_json(name, heights(spec)?),
        Command::Phi => to_json(name, phi(spec)?),
        Command::Iso => to_json(name, iso(spec)?),
        Command::Asymptotics => asymptotics(spec),
        Command::Verify => to_json(name, verify(spec)?),
        Command::Oracle => to_json(name, oracle(spec)?),
    }
}

fn potential(spec: &JobSpec) -> &PotentialSpec {
    spec.potential
        .as_ref()
        .expect("validated: potential present")
}

#[derive(Serialize)]
struct BandsReport {
    period: usize,
    values: Vec<Num>,
    edges: Vec<Num>,
    bands: Vec<[Num; 2]>,
    critical: Vec<Num>,
    h_values: Vec<Num>,
    heights: Vec<Num>,
    open_gaps: Vec<usize>,
}

fn bands(spec: &JobSpec) -> Result<BandsReport, CliError> {
    let q = potential(spec).general()?;
    let bs = BandStructure::from_potential_with_tol(&q, spec.root_tol)?;
    Ok(BandsReport {
        period: q.period(),
        values: nums(q.values()),
        edges: nums(&bs.all_edges()),
        bands: bs.bands().iter().map(|&(a, b)| [Num(a), Num(b)]).collect(),
        critical: nums(&bs.critical),
        h_values: nums(&bs.h_values),
        heights: nums(&bs.heights),
        open_gaps: (1..=bs.gap_count()).filter(|&n| bs.is_open(n)).collect(),
    })
}

#[derive(Serialize)]
struct HeightsReport {
    heights: Vec<Num>,
    /// `∂h_n/∂q_m` for `n, m = 1..k`, when the potential is odd and the
    /// first `k` gaps are open.
    jacobian: Option<Vec<Vec<Num>>>,
    jacobian_note: Option<String>,
}

/// The odd form of the job's potential, or `None` if a plain sequence is
/// not odd.
fn as_odd(p: &PotentialSpec) -> Result<Option<OddPotential>, CliError> {
    match p.odd() {
        Ok(q) => Ok(Some(q)),
        Err(CliError::Domain(Error::NotOdd { .. } | Error::InvalidPeriod(_))) if p.is_values() => {
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn heights(spec: &JobSpec) -> Result<HeightsReport, CliError> {
    let p = potential(spec);
    let q = p.general()?;
    let bs = BandStructure::from_potential_with_tol(&q, spec.root_tol)?;
    let (jacobian, jacobian_note) = match as_odd(p)? {
        None => (None, Some("potential is not odd".to_string())),
        Some(o) => match height_jacobian(&o) {
            Ok(m) => (Some(rows(&m)), None),
            Err(e @ (Error::ClosedGap { .. } | Error::DegenerateCritical { .. })) => {
                (None, Some(e.to_string()))
            }
            Err(e) => return Err(e.into()),
        },
    };
    Ok(HeightsReport {
        heights: nums(&bs.heights),
        jacobian,
        jacobian_note,
    })
}

#[derive(Serialize)]
struct PhiReport {
    k: usize,
    qhat: Vec<Num>,
    /// Coefficients of `λ^{2k-2}, …, λ^0`.
    phi: Vec<Num>,
    phi0: Vec<Num>,
    quadratic_model: Vec<Num>,
    /// All coefficients of `Δ`, lowest degree first.
    coefficients: Vec<Num>,
    jacobian_det: Num,
}

fn phi(spec: &JobSpec) -> Result<PhiReport, CliError> {
    let q = potential(spec).odd()?;
    let e = ExpansionMatrices::new(q.k());
    let d = DiscriminantPoly::from_potential(q.potential());
    Ok(PhiReport {
        k: q.k(),
        qhat: nums(q.qhat()),
        phi: nums(phi_map(&q).entries()),
        phi0: nums(&e.phi0),
        quadratic_model: nums(e.quadratic_phi(&q).entries()),
        coefficients: nums(d.coeffs()),
        jacobian_det: Num(singularity(&q, spec.newton.singular_threshold).det),
    })
}

#[derive(Serialize)]
struct PotentialOut {
    qhat: Vec<Num>,
    values: Vec<Num>,
}

impl From<&OddPotential> for PotentialOut {
    fn from(q: &OddPotential) -> Self {
        PotentialOut {
            qhat: nums(q.qhat()),
            values: nums(q.values()),
        }
    }
}

#[derive(Serialize)]
struct MemberOut {
    #[serde(flatten)]
    potential: PotentialOut,
    residual: Num,
    coefficient_residual: Num,
    edge_residual: Num,
    height_residual: Num,
    verified: bool,
}

#[derive(Serialize)]
struct SeedOut {
    signs: Vec<i8>,
    converged: bool,
    iterations: Option<usize>,
    error: Option<String>,
}

#[derive(Serialize)]
struct IsoReport {
    k: usize,
    count: usize,
    expected_count: usize,
    failed_seeds: usize,
    verify_tol: Num,
    source: PotentialOut,
    members: Vec<MemberOut>,
    seeds: Vec<SeedOut>,
}

fn iso(spec: &JobSpec) -> Result<IsoReport, CliError> {
    let set: IsoSet = match (&spec.potential, &spec.target) {
        (Some(p), _) => isospectral_set(&p.odd()?, &spec.newton)?,
        (None, Some(t)) => isospectral_from_target(t, &spec.newton)?,
        (None, None) => unreachable!("validated: iso has a potential or a target"),
    };
    let k = set.source.k();
    let members = set
        .members
        .iter()
        .zip(&set.residuals)
        .map(|(m, &r)| {
            let v = verify_isospectral(m, &set.source, VERIFY_TOL);
            MemberOut {
                potential: m.into(),
                residual: Num(r),
                coefficient_residual: Num(v.coefficient_residual),
                edge_residual: Num(v.edge_residual),
                height_residual: Num(v.height_residual),
                verified: v.passes(),
            }
        })
        .collect();
    let seeds = set
        .seeds
        .iter()
        .map(|s| SeedOut {
            signs: s
                .signs
                .iter()
                .map(|&x| if x < 0.0 { -1 } else { 1 })
                .collect(),
            converged: s.result.is_ok(),
            iterations: s.result.as_ref().ok().map(|r| r.iterations),
            error: s.result.as_ref().err().map(|e| e.to_string()),
        })
        .collect();
    Ok(IsoReport {
        k,
        count: set.count(),
        expected_count: 1 << k,
        failed_seeds: set.failed_seeds(),
        verify_tol: Num(VERIFY_TOL),
        source: (&set.source).into(),
        members,
        seeds,
    })
}

#[derive(Serialize)]
struct PredictionOut {
    n: usize,
    edge_shift_sq: Num,
    height_sq: Num,
}

#[derive(Serialize)]
struct RowOut {
    t: Num,
    quantity: &'static str,
    n: usize,
    exact: Num,
    predicted: Num,
    rel_error: Num,
}

#[derive(Serialize)]
struct OrderOut {
    quantity: &'static str,
    n: usize,
    order: Option<Num>,
}

#[derive(Serialize)]
struct AsymptoticsReport {
    k: usize,
    qhat: Vec<Num>,
    predictions: Vec<PredictionOut>,
    t_grid: Vec<Num>,
    rows: Vec<RowOut>,
    orders: Vec<OrderOut>,
    model_order: Option<Num>,
    jacobian_order: Option<Num>,
}

fn asymptotics(spec: &JobSpec) -> Result<String, CliError> {
    let q = potential(spec).odd()?;
    let report = convergence_study(&q, &spec.t_grid)?;
    if spec.format == Format::Csv {
        let table: Vec<CsvRow> = report
            .rows
            .iter()
            .map(|r| CsvRow {
                t: r.t,
                quantity: format!("{}[{}]", r.quantity.name(), r.n),
                exact: r.exact,
                predicted: r.predicted,
                rel_error: r.rel_error,
            })
            .collect();
        return to_csv(&table);
    }
    let out = AsymptoticsReport {
        k: q.k(),
        qhat: nums(q.qhat()),
        predictions: predict(&q)
            .iter()
            .map(|p| PredictionOut {
                n: p.n,
                edge_shift_sq: Num(p.edge_shift_sq),
                height_sq: Num(p.height_sq),
            })
            .collect(),
        t_grid: nums(&report.t_grid),
        rows: report
            .rows
            .iter()
            .map(|r| RowOut {
                t: Num(r.t),
                quantity: r.quantity.name(),
                n: r.n,
                exact: Num(r.exact),
                predicted: Num(r.predicted),
                rel_error: Num(r.rel_error),
            })
            .collect(),
        orders: report
            .orders
            .iter()
            .map(|o| OrderOut {
                quantity: o.quantity.name(),
                n: o.n,
                order: o.order.map(Num),
            })
            .collect(),
        model_order: report.model_order.map(Num),
        jacobian_order: report.jacobian_order.map(Num),
    };
    to_json("asymptotics", out)
}

#[derive(Serialize)]
struct SuiteRow {
    k: usize,
    det_a_minus_one: Num,
    identity_residual: Num,
    f_equals_w_qhat_sq: Num,
}

#[derive(Serialize)]
struct SymmetryOut {
    shift: Num,
    reflection: Num,
    lambda_negation: Num,
    potential_negation: Num,
}

#[derive(Serialize)]
struct VerifyReport {
    suite: Vec<SuiteRow>,
    symmetry: SymmetryOut,
    model_residual: Option<Num>,
    max_det_a: Num,
    max_identity: Num,
    max_f: Num,
    max_symmetry: Num,
    passes: bool,
}

/// Deterministic test coordinates for the built-in suite.
fn probe_coords(k: usize) -> Vec<f64> {
    (1..=k).map(|m| (1.3 * m as f64 + k as f64).sin()).collect()
}

fn f_residual(q: &OddPotential) -> f64 {
    let wq = w_matrix(q.k()).mul_vec(&q.qhat_sq());
    q.f_vector()
        .iter()
        .zip(wq)
        .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

/// `max_λ |Δ(λ, a) - Δ(λ, b)| / (1 + |Δ(λ, a)|)` on a fixed grid.
fn delta_gap(a: &Potential, b: &Potential, negate_lambda: bool) -> f64 {
    (0..=40)
        .map(|i| -3.0 + 0.15 * i as f64)
        .map(|x| {
            let da = eval_delta(x, a);
            let db = eval_delta(if negate_lambda { -x } else { x }, b);
            (da - db).abs() / (1.0 + da.abs())
        })
        .fold(0.0, f64::max)
}

fn verify(spec: &JobSpec) -> Result<VerifyReport, CliError> {
    let given = match &spec.potential {
        Some(p) => Some(p.odd()?),
        None => None,
    };
    let mut suite = Vec::with_capacity(SUITE_MAX_K);
    for k in 1..=SUITE_MAX_K {
        let q = match &given {
            Some(g) if g.k() == k => g.clone(),
            _ => OddPotential::from_coords(&probe_coords(k)),
        };
        suite.push(SuiteRow {
            k,
            det_a_minus_one: Num((ExpansionMatrices::new(k).a.determinant() - 1.0).abs()),
            identity_residual: Num(identity_residual(k)),
            f_equals_w_qhat_sq: Num(f_residual(&q)),
        });
    }
    let q = given
        .clone()
        .unwrap_or_else(|| OddPotential::from_coords(&probe_coords(4)));
    let p = q.potential();
    let symmetry = [
        delta_gap(p, &p.shift(), false),
        delta_gap(p, &p.reflect(), false),
        delta_gap(p, p, true),
        delta_gap(p, &p.negate(), false),
    ];
    let max = |f: fn(&SuiteRow) -> f64| suite.iter().map(f).fold(0.0, f64::max);
    let max_det_a = max(|r| r.det_a_minus_one.0);
    let max_identity = max(|r| r.identity_residual.0);
    let max_f = max(|r| r.f_equals_w_qhat_sq.0);
    let max_symmetry = symmetry.iter().copied().fold(0.0, f64::max);
    let passes =
        max_det_a <= 1e-9 && max_identity <= 1e-9 && max_f <= 1e-10 && max_symmetry <= 1e-12;
    Ok(VerifyReport {
        symmetry: SymmetryOut {
            shift: Num(symmetry[0]),
            reflection: Num(symmetry[1]),
            lambda_negation: Num(symmetry[2]),
            potential_negation: Num(symmetry[3]),
        },
        model_residual: given.as_ref().map(|g| Num(model_residual(g))),
        suite,
        max_det_a: Num(max_det_a),
        max_identity: Num(max_identity),
        max_f: Num(max_f),
        max_symmetry: Num(max_symmetry),
        passes,
    })
}

#[derive(Serialize)]
struct OracleReport {
    period: usize,
    recurrence: Vec<Num>,
    combinatorial: Vec<Num>,
    max_rel_diff: Num,
}

fn oracle(spec: &JobSpec) -> Result<OracleReport, CliError> {
    let q = potential(spec).general()?;
    let a = DiscriminantPoly::from_potential(&q);
    let b = delta_combinatorial(&q)?;
    let diff = a.as_poly().max_coeff_diff(b.as_poly()) / a.as_poly().max_abs_coeff().max(1.0);
    Ok(OracleReport {
        period: q.period(),
        recurrence: nums(a.coeffs()),
        combinatorial: nums(b.coeffs()),
        max_rel_diff: Num(diff),
    })
}
