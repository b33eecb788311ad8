mod common;

use common::*;
use isospec::asymptotics::{
    convergence_study, fit_order, geometric_grid, model_delta, model_delta_poly, model_residual,
    predict, predict_edge_shift_via_identity, sign_flip_delta_change, sign_flip_model_invariance,
    unperturbed_value_residual, validate_grid, Quantity,
};
use isospec::bands::BandStructure;
use isospec::inverse::sign_patterns;
use isospec::{Error, OddPotential};

#[test]
fn identity_route_reproduces_edge_shifts() {
    let mut rng = rng(41);
    for k in 1..=8 {
        let q = random_odd(k, 1.0, &mut rng);
        let direct = predict(&q);
        let via = predict_edge_shift_via_identity(&q);
        for (p, v) in direct.iter().zip(via) {
            assert!((p.edge_shift_sq - v).abs() < 1e-12, "k={k}");
        }
    }
}

#[test]
fn model_is_blind_to_sign_flips_but_delta_is_not() {
    let mut rng = rng(42);
    let q = admissible_odd(3, 0.1, &mut rng);
    for signs in sign_patterns(3) {
        assert!(sign_flip_model_invariance(&q, &signs) < 1e-12);
    }
    // The true discriminant notices the flip only at fourth order.
    let signs = [-1.0, 1.0, 1.0];
    let small = sign_flip_delta_change(&q.scaled(0.5), &signs);
    let large = sign_flip_delta_change(&q, &signs);
    let ratio = large / small;
    assert!((ratio - 16.0).abs() < 2.0, "ratio {ratio}");
}

#[test]
fn model_delta_two_ways() {
    let q = OddPotential::from_coords(&[0.2, -0.1, 0.05]);
    let poly = model_delta_poly(&q);
    for &x in &[-2.1, -0.5, 0.0, 1.3] {
        assert!((poly.eval(x) - model_delta(x, &q)).abs() < 1e-12);
    }
}

#[test]
fn remainders_scale_as_claimed() {
    let q = OddPotential::from_coords(&[0.6, -0.4, 0.7]);
    let ratio = |f: fn(&OddPotential) -> f64, order: i32| {
        let a = f(&q.scaled(0.02));
        let b = f(&q.scaled(0.01));
        (a / b) / 2f64.powi(order)
    };
    assert!((ratio(model_residual, 4) - 1.0).abs() < 0.1);
    // Δ is even in q on the odd subspace, so this one skips third order.
    assert!((ratio(unperturbed_value_residual, 4) - 1.0).abs() < 0.1);
}

#[test]
fn alternating_flip_is_a_half_period_shift() {
    // ê_m[n + k] = (-1)^m ê_m[n], so flipping every odd mode rotates q by k.
    let mut rng = rng(43);
    for k in 2..=6 {
        let q = random_odd(k, 1.0, &mut rng);
        let signs: Vec<f64> = (1..=k)
            .map(|m| if m % 2 == 1 { -1.0 } else { 1.0 })
            .collect();
        let flipped = q.flipped(&signs);
        let mut rotated = q.values().to_vec();
        rotated.rotate_left(k);
        for (a, b) in flipped.values().iter().zip(&rotated) {
            assert!((a - b).abs() < 1e-13);
        }
        assert!(sign_flip_delta_change(&q.scaled(0.1), &signs) < 1e-11);
    }
}

#[test]
fn k1_predictions_are_exact_to_leading_order() {
    // h = arccosh(1 + t²/2), so h² = t² - t⁴/12 + …
    let t = 1e-3;
    let q = OddPotential::from_values(&[t, -t]).unwrap();
    let h = BandStructure::from_potential(q.potential())
        .unwrap()
        .heights[0];
    let p = predict(&q)[0];
    assert!((h * h - p.height_sq).abs() < 1e-3 * p.height_sq * t);
}

#[test]
fn study_reports_every_quantity() {
    let q = OddPotential::from_coords(&[0.5, -0.8]);
    let grid = geometric_grid(0.1, 0.001, 5).unwrap();
    let r = convergence_study(&q, &grid).unwrap();
    assert_eq!(r.rows.len(), grid.len() * 4 * 2);
    assert!(r.min_order(Quantity::HeightSq).unwrap() > 1.8);
    assert!(r.min_order(Quantity::DeltaAtUnperturbed).unwrap() > 1.8);
    let degenerate = OddPotential::from_coords(&[0.5, 0.0]);
    assert_eq!(
        convergence_study(&degenerate, &grid).unwrap_err(),
        Error::PredictionDegenerate { mode: 2 }
    );
}

#[test]
fn grids_and_fits() {
    let g = geometric_grid(0.1, 0.001, 3).unwrap();
    assert!((g[1] - 0.01).abs() < 1e-15);
    assert_eq!(validate_grid(&[0.01, 0.1]), Err(Error::InvalidGrid));
    assert_eq!(validate_grid(&[0.5]), Err(Error::InvalidGrid));
    assert_eq!(geometric_grid(0.0, 0.1, 3), Err(Error::InvalidGrid));

    let t = [0.1, 0.05, 0.02, 0.01];
    let e: Vec<f64> = t.iter().map(|x: &f64| 3.0 * x.powi(3)).collect();
    assert!((fit_order(&t, &e).unwrap() - 3.0).abs() < 1e-12);
    assert_eq!(fit_order(&t, &[1e-20; 4]), None);
}
