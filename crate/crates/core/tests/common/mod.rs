#![allow(dead_code)]

use isospec::lyapunov::{jacobian_phi, phi_map};
use isospec::{Matrix, OddPotential, Potential};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Fourier coordinates with `|q̂_n| ∈ [0.3, 1]` and random signs.
pub fn admissible_qhat(k: usize, rng: &mut StdRng) -> Vec<f64> {
    (0..k)
        .map(|_| {
            let m: f64 = rng.random_range(0.3..=1.0);
            if rng.random_bool(0.5) {
                m
            } else {
                -m
            }
        })
        .collect()
}

/// An admissible direction normalised to `‖q‖ = t`.
pub fn admissible_odd(k: usize, t: f64, rng: &mut StdRng) -> OddPotential {
    let c = admissible_qhat(k, rng);
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    let c: Vec<f64> = c.iter().map(|x| t * x / norm).collect();
    OddPotential::from_coords(&c)
}

pub fn random_odd(k: usize, scale: f64, rng: &mut StdRng) -> OddPotential {
    let c: Vec<f64> = (0..k).map(|_| rng.random_range(-scale..=scale)).collect();
    OddPotential::from_coords(&c)
}

pub fn random_zero_sum(p: usize, scale: f64, rng: &mut StdRng) -> Potential {
    let mut v: Vec<f64> = (0..p).map(|_| rng.random_range(-scale..=scale)).collect();
    let mean = v.iter().sum::<f64>() / p as f64;
    for x in &mut v {
        *x -= mean;
    }
    Potential::new(v).unwrap()
}

/// Central differences of `g` in the free chart.
pub fn fd_jacobian(q: &OddPotential, step: f64, g: impl Fn(&OddPotential) -> Vec<f64>) -> Matrix {
    let k = q.k();
    let mut jac = Matrix::zeros(k, k);
    for m in 0..k {
        let mut plus = q.free().to_vec();
        let mut minus = q.free().to_vec();
        plus[m] += step;
        minus[m] -= step;
        let gp = g(&OddPotential::from_free(&plus));
        let gm = g(&OddPotential::from_free(&minus));
        for n in 0..k {
            jac[(n, m)] = (gp[n] - gm[n]) / (2.0 * step);
        }
    }
    jac
}

pub fn fd_jacobian_phi(q: &OddPotential) -> Matrix {
    fd_jacobian(q, 1e-6, |p| phi_map(p).0)
}

/// `max |J_analytic - J_fd| / max |J_analytic|`.
pub fn jacobian_phi_rel_error(q: &OddPotential) -> f64 {
    let a = jacobian_phi(q);
    let f = fd_jacobian_phi(q);
    a.sub(&f).max_abs() / a.max_abs().max(f64::MIN_POSITIVE)
}
