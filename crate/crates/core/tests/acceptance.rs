//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p isospec --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use isospec::asymptotics::{convergence_study, default_grid, identity_residual, Quantity};
use isospec::bands::{jacobian_h, BandStructure};
use isospec::combinatorial::{
    count_s, delta_combinatorial_generic, enumerate_s, fundamental_combinatorial, poly_f,
};
use isospec::inverse::{isospectral_set, singularity, verify_isospectral, NewtonOptions};
use isospec::lyapunov::{
    delta_poly_generic, delta_zero_exact, eval_delta, eval_delta_jet, fundamental_polys,
    jacobian_phi, unperturbed_critical_points, unperturbed_second_derivative,
};
use isospec::potential::w_matrix;
use isospec::{DiscriminantPoly, ExpansionMatrices, OddPotential, Poly, Potential};

use common::*;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn k1_exact_forms() -> Outcome {
    let mut coeff_err = 0.0f64;
    let mut edge_err = 0.0f64;
    let mut height_err = 0.0f64;
    for t in [0.1, 1.0] {
        let q = OddPotential::from_values(&[t, -t]).unwrap();
        let d = DiscriminantPoly::from_potential(q.potential());
        let expected = [-t * t - 2.0, 0.0, 1.0];
        for (c, e) in d.coeffs().iter().zip(expected) {
            coeff_err = coeff_err.max((c - e).abs());
        }
        let bs = BandStructure::from_potential(q.potential()).unwrap();
        let r = (t * t + 4.0).sqrt();
        for (e, x) in bs.all_edges().iter().zip([-r, -t, t, r]) {
            edge_err = edge_err.max((e - x).abs());
        }
        height_err = height_err.max((bs.heights[0] - (1.0 + t * t / 2.0).acosh()).abs());
    }
    outcome(
        coeff_err <= 1e-14 && edge_err <= 1e-12 && height_err <= 1e-12,
        format!("coeff {coeff_err:.1e} edges {edge_err:.1e} height {height_err:.1e}"),
    )
}

fn chebyshev_baseline() -> Outcome {
    let mut exact = true;
    let mut value_err = 0.0f64;
    for k in 1..=10 {
        let zeros = vec![0i128; 2 * k];
        exact &= delta_poly_generic(&zeros) == delta_zero_exact(k);
        let q = Potential::zero(2 * k).unwrap();
        for i in 1..=257 {
            let lambda = -2.0 + 4.0 * i as f64 / 258.0;
            let expected = 2.0 * (2.0 * k as f64 * (lambda / 2.0).acos()).cos();
            value_err = value_err.max((eval_delta(lambda, &q) - expected).abs());
        }
    }
    outcome(
        exact && value_err <= 1e-10,
        format!(
            "integer coefficients exact: {exact}, max |Δ - 2cos(2k·acos(λ/2))| {value_err:.1e}"
        ),
    )
}

fn identity_suite() -> Outcome {
    let det_err = (1..=10)
        .map(|k| (ExpansionMatrices::new(k).a.determinant() - 1.0).abs())
        .fold(0.0, f64::max);
    let ident_err = (1..=8).map(identity_residual).fold(0.0, f64::max);
    let mut rng = rng(3);
    let mut f_err = 0.0f64;
    for k in 1..=8 {
        let w = w_matrix(k);
        for _ in 0..50 {
            let q = random_odd(k, 1.0, &mut rng);
            let wq = w.mul_vec(&q.qhat_sq());
            for (a, b) in q.f_vector().iter().zip(wq) {
                f_err = f_err.max((a - b).abs());
            }
        }
    }
    let mut d2_err = 0.0f64;
    for k in 1..=8 {
        let zero = Potential::zero(2 * k).unwrap();
        for (i, &x) in unperturbed_critical_points(k).iter().enumerate() {
            let exact = unperturbed_second_derivative(k, i + 1);
            let got = eval_delta_jet(x, &zero)[2];
            d2_err = d2_err.max(((got - exact) / exact).abs());
        }
    }
    outcome(
        det_err <= 1e-9 && ident_err <= 1e-9 && f_err <= 1e-10 && d2_err <= 1e-9,
        format!(
            "det A {det_err:.1e}, identity rows {ident_err:.1e}, f = Wq̂² {f_err:.1e}, Δ'' rel {d2_err:.1e}"
        ),
    )
}

fn coeff_rel_diff(a: &Poly<f64>, b: &Poly<f64>) -> f64 {
    a.max_coeff_diff(b) / a.max_abs_coeff().max(1.0)
}

fn oracle_equivalence() -> Outcome {
    let mut rng = rng(4);
    let mut delta_err = 0.0f64;
    for p in 2..=8 {
        for _ in 0..100 {
            let q = random_zero_sum(p, 1.0, &mut rng);
            let a = delta_poly_generic(q.values());
            let b = delta_combinatorial_generic(q.values()).unwrap();
            delta_err = delta_err.max(coeff_rel_diff(&a, &b));
        }
    }

    let mut fund_err = 0.0f64;
    let mut fund_exact = true;
    for n in 1..=10 {
        let qf = random_zero_sum(n + 1, 1.0, &mut rng);
        let (phi, theta) = fundamental_polys(qf.values());
        let (cphi, ctheta) = fundamental_combinatorial(n, qf.values()).unwrap();
        fund_err = fund_err
            .max(coeff_rel_diff(&phi[n + 1], &cphi))
            .max(coeff_rel_diff(&theta[n + 1], &ctheta));
        let qi: Vec<i128> = (0..n as i128 + 1).map(|i| (i * 7 + 3) % 11 - 5).collect();
        let (phi, theta) = fundamental_polys(&qi);
        let (cphi, ctheta) = fundamental_combinatorial(n, &qi).unwrap();
        fund_exact &= phi[n + 1].clone().trimmed() == cphi.trimmed()
            && theta[n + 1].clone().trimmed() == ctheta.trimmed();
    }

    // F recurrences, exactly, on integer sites.
    let q: Vec<i128> = (1..=14).map(|i| (i * 5) % 9 - 4).collect();
    let f = |j: usize, n: usize| poly_f(j, n, &q).unwrap().trimmed();
    let mut rec_ok = true;
    for n in 1..=12 {
        for j in 1..n {
            let rhs = &f(j, n + 1).mul_shifted_identity(q[n + 1]) + &f(j + 1, n);
            rec_ok &= f(j + 1, n + 2) == rhs.trimmed();
        }
        rec_ok &= f(n + 1, n + 1) == f(n, n).mul_shifted_identity(q[n]).trimmed();
        if n >= 2 {
            rec_ok &= f(n, n + 1) == f(n - 1, n).mul_shifted_identity(q[n]).trimmed();
        }
    }

    let mut count_ok = true;
    let mut checked = 0;
    for n in 2..=15 {
        for m in 1..n {
            for r in 0..n - m {
                count_ok &=
                    enumerate_s(m, n, r).unwrap().len() as u128 == count_s(m, n, r).unwrap();
                checked += 1;
            }
        }
    }
    outcome(
        delta_err <= 1e-9 && fund_err <= 1e-9 && fund_exact && rec_ok && count_ok,
        format!(
            "Δ rel {delta_err:.1e}, fundamentals rel {fund_err:.1e} (exact: {fund_exact}), \
             F recurrences exact: {rec_ok}, #S identity on {checked} triples: {count_ok}"
        ),
    )
}

/// `1 + Σ |c_i| |λ|^i`, the natural size of a rounding error in `Δ(λ)`.
fn evaluation_scale(d: &DiscriminantPoly, x: f64) -> f64 {
    1.0 + d
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c.abs() * x.abs().powi(i as i32))
        .sum::<f64>()
}

fn symmetry_suite() -> Outcome {
    let mut rng = rng(5);
    let mut worst = 0.0f64;
    let grid: [f64; 7] = [-2.7, -1.3, -0.4, 0.0, 0.9, 1.8, 2.6];
    let scaled = |a: f64, b: f64, scale: f64| (a - b).abs() / scale;
    for case in 0..100 {
        let p = 2 + case % 9;
        let q = random_zero_sum(p, 1.5, &mut rng);
        let d = DiscriminantPoly::from_potential(&q);
        for &x in &grid {
            let scale = evaluation_scale(&d, x);
            let base = eval_delta(x, &q);
            worst = worst
                .max(scaled(eval_delta(x, &q.shift()), base, scale))
                .max(scaled(eval_delta(x, &q.reflect()), base, scale));
        }
        let k = 1 + case % 6;
        let o = random_odd(k, 1.5, &mut rng);
        let d = DiscriminantPoly::from_potential(o.potential());
        for &x in &grid {
            let scale = evaluation_scale(&d, x);
            let base = eval_delta(x, o.potential());
            worst = worst
                .max(scaled(eval_delta(-x, o.potential()), base, scale))
                .max(scaled(eval_delta(x, &o.potential().negate()), base, scale));
        }
    }
    outcome(worst <= 1e-12, format!("max scaled deviation {worst:.1e}"))
}

fn convergence_orders() -> Outcome {
    let mut rng = rng(6);
    let c = admissible_qhat(3, &mut rng);
    let q = OddPotential::from_coords(&c);
    let report = convergence_study(&q, &default_grid()).unwrap();
    let h = report.min_order(Quantity::HeightSq);
    let em = report.min_order(Quantity::EdgeShiftSqMinus);
    let ep = report.min_order(Quantity::EdgeShiftSqPlus);
    let edge = match (em, ep) {
        (Some(a), Some(b)) => Some(a.min(b)),
        _ => None,
    };
    let model = report.model_order;
    let jac = report.jacobian_order;
    let ok = |o: Option<f64>, min: f64| o.is_some_and(|o| o >= min);
    let fmt = |o: Option<f64>| o.map_or("n/a".into(), |o| format!("{o:.2}"));
    outcome(
        ok(h, 1.8) && ok(edge, 0.8) && ok(model, 3.8) && ok(jac, 2.8),
        format!(
            "q̂ = {c:.3?}: height_sq {} (≥1.8), edge_shift_sq {} (≥0.8), model Δ {} (≥3.8), Jacobian {} (≥2.8)",
            fmt(h),
            fmt(edge),
            fmt(model),
            fmt(jac)
        ),
    )
}

struct IsoCase {
    q: OddPotential,
    count: usize,
    verified: bool,
    elapsed: Duration,
}

fn iso_cases() -> Vec<IsoCase> {
    let mut rng = rng(7);
    let opts = NewtonOptions::default();
    let mut out = Vec::new();
    for k in [2, 3] {
        for _ in 0..20 {
            let q = admissible_odd(k, 0.05, &mut rng);
            let start = Instant::now();
            let iso = isospectral_set(&q, &opts).unwrap();
            let elapsed = start.elapsed();
            let verified = iso
                .members
                .iter()
                .all(|m| verify_isospectral(m, &q, 1e-8).passes());
            out.push(IsoCase {
                q,
                count: iso.count(),
                verified,
                elapsed,
            });
        }
    }
    out
}

fn isospectral_count(cases: &[IsoCase]) -> Outcome {
    let wrong = cases.iter().filter(|c| c.count != 1 << c.q.k()).count();
    let unverified = cases.iter().filter(|c| !c.verified).count();
    let slowest = cases.iter().map(|c| c.elapsed).max().unwrap_or_default();
    outcome(
        wrong == 0 && unverified == 0 && slowest <= Duration::from_secs(2),
        format!(
            "{} cases: {wrong} with wrong count, {unverified} failing verification, slowest {:.3}s",
            cases.len(),
            slowest.as_secs_f64()
        ),
    )
}

fn jacobian_identities() -> Outcome {
    let mut rng = rng(8);
    let mut phi_err = 0.0f64;
    let mut chain_err = 0.0f64;
    for k in 1..=5 {
        for _ in 0..5 {
            let q = admissible_odd(k, 0.05 + 0.5 * rng.random::<f64>(), &mut rng);
            phi_err = phi_err.max(jacobian_phi_rel_error(&q));
            let analytic = jacobian_h(&q).unwrap();
            let fd = fd_jacobian(&q, 1e-6, |p| {
                BandStructure::from_potential(p.potential())
                    .unwrap()
                    .h_values[..p.k()]
                    .to_vec()
            });
            chain_err = chain_err.max(analytic.sub(&fd).max_abs() / analytic.max_abs());
        }
    }
    let zero = OddPotential::zero(4);
    let vanishes = jacobian_phi(&zero).max_abs() == 0.0;
    let flagged = singularity(&zero, NewtonOptions::default().singular_threshold).is_singular;
    outcome(
        phi_err <= 1e-7 && chain_err <= 1e-6 && vanishes && flagged,
        format!(
            "d_qΦ vs FD rel {phi_err:.1e}, d_qH = V·d_qΦ rel {chain_err:.1e}, \
             zero Jacobian at q=0: {vanishes}, flagged singular: {flagged}"
        ),
    )
}

fn gaps_open(cases: &[IsoCase]) -> Outcome {
    let opts = NewtonOptions::default();
    let mut min_h = f64::INFINITY;
    let mut all_nonsingular = true;
    for c in cases {
        all_nonsingular &= !singularity(&c.q, opts.singular_threshold).is_singular;
        let bs = BandStructure::from_potential(c.q.potential()).unwrap();
        min_h = bs.heights.iter().fold(min_h, |m, &h| m.min(h));
    }
    outcome(
        all_nonsingular && min_h > 1e-4,
        format!("all nonsingular: {all_nonsingular}, smallest height {min_h:.3e}"),
    )
}

fn main() {
    let started = Instant::now();
    let cases = iso_cases();
    let results: Vec<(&str, Outcome)> = vec![
        ("k=1 exact forms", k1_exact_forms()),
        ("Chebyshev baseline", chebyshev_baseline()),
        ("identity suite", identity_suite()),
        ("combinatorial oracle equivalence", oracle_equivalence()),
        ("symmetry suite", symmetry_suite()),
        ("small-potential convergence orders", convergence_orders()),
        ("isospectral set has 2^k members", isospectral_count(&cases)),
        ("Jacobian identities", jacobian_identities()),
        ("all gaps open near nonsingular q", gaps_open(&cases)),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{tag}] {name}: {}", i + 1, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {}/{} passed in {:.2}s",
        results.len() - failed,
        results.len(),
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
