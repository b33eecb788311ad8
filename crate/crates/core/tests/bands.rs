mod common;

use common::*;
use isospec::bands::{critical_points, gap_sign, BandStructure};
use isospec::lyapunov::eval_delta;
use isospec::{DiscriminantPoly, OddPotential, Poly, Potential};
use proptest::prelude::*;

#[test]
fn edges_solve_delta_squared_minus_four() {
    let mut rng = rng(31);
    for p in 2..=9 {
        let q = random_zero_sum(p, 1.0, &mut rng);
        let bs = BandStructure::from_potential(&q).unwrap();
        let edges = bs.all_edges();
        assert_eq!(edges.len(), 2 * p);
        assert!(edges.windows(2).all(|w| w[0] <= w[1]));
        // Δ² - 4 is monic of degree 2p with exactly these roots.
        let d = DiscriminantPoly::from_potential(&q);
        let lhs = &(d.as_poly() * d.as_poly()) - &Poly::constant(4.0);
        let rhs = edges
            .iter()
            .fold(Poly::one(), |acc, &e| acc.mul_shifted_identity(e));
        assert!(
            lhs.max_coeff_diff(&rhs) < 1e-8 * lhs.max_abs_coeff(),
            "p={p}"
        );
        for e in &edges {
            assert!((eval_delta(*e, &q).abs() - 2.0).abs() < 1e-9);
        }
    }
}

#[test]
fn heights_follow_critical_values() {
    let mut rng = rng(32);
    let q = random_zero_sum(6, 1.0, &mut rng);
    let bs = BandStructure::from_potential(&q).unwrap();
    for (i, (&h, &big_h)) in bs.heights.iter().zip(&bs.h_values).enumerate() {
        let s = gap_sign(6, i + 1);
        assert!(s * big_h >= 2.0);
        assert!((2.0 * s * h.cosh() - big_h).abs() < 1e-10 * big_h.abs());
        let c = bs.critical[i];
        assert!(bs.edges_minus[i] <= c && c <= bs.edges_plus[i]);
    }
}

#[test]
fn polynomial_and_recurrence_paths_agree() {
    let mut rng = rng(33);
    for p in 2..=8 {
        let q = random_zero_sum(p, 1.0, &mut rng);
        let a = BandStructure::from_potential(&q).unwrap();
        let b = BandStructure::from_poly(&DiscriminantPoly::from_potential(&q)).unwrap();
        for (x, y) in a.all_edges().iter().zip(b.all_edges()) {
            assert!((x - y).abs() < 1e-9);
        }
        let c = critical_points(&DiscriminantPoly::from_potential(&q)).unwrap();
        for (x, y) in a.critical.iter().zip(c) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}

#[test]
fn free_operator_has_closed_gaps_at_chebyshev_nodes() {
    for p in 2..=8 {
        let bs = BandStructure::from_potential(&Potential::zero(p).unwrap()).unwrap();
        for n in 1..p {
            let node = -2.0 * (std::f64::consts::PI * n as f64 / p as f64).cos();
            assert!((bs.critical[n - 1] - node).abs() < 1e-12);
            assert!(!bs.is_open(n));
        }
        assert_eq!(bs.bands().len(), p);
    }
}

#[test]
fn odd_spectrum_is_symmetric() {
    let mut rng = rng(34);
    for k in 1..=5 {
        let q = random_odd(k, 0.7, &mut rng);
        let e = BandStructure::from_potential(q.potential())
            .unwrap()
            .all_edges();
        for (a, b) in e.iter().zip(e.iter().rev()) {
            assert!((a + b).abs() < 1e-10);
        }
    }
}

#[test]
fn small_admissible_potentials_open_every_gap() {
    let mut rng = rng(35);
    for k in 2..=4 {
        let q: OddPotential = admissible_odd(k, 0.05, &mut rng);
        let bs = BandStructure::from_potential(q.potential()).unwrap();
        assert!((1..2 * k).all(|n| bs.is_open(n)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn spectrum_is_invariant_under_shift_and_reflection(v in prop::collection::vec(-1.5f64..1.5, 2..8)) {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let q = Potential::new(v.iter().map(|a| a - mean).collect()).unwrap();
        let base = BandStructure::from_potential(&q).unwrap().all_edges();
        for other in [q.shift(), q.reflect()] {
            let e = BandStructure::from_potential(&other).unwrap().all_edges();
            for (a, b) in base.iter().zip(&e) {
                prop_assert!((a - b).abs() < 1e-8);
            }
        }
    }
}
