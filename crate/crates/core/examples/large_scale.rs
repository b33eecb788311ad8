//! Isospectral search far from the free operator.
//!
//! For small odd potentials the sign flips of `q̂` give `2^k` isospectral
//! partners. At large scale the sites decouple and the spectrum is close to
//! that of `diag(q)`, so permuting and flipping the free values `q_1..q_k`
//! becomes the natural seed family. This runs Newton from all `2^k k!` such
//! seeds at `t = 50` and reports how many distinct solutions appear.
//! Nothing here is asserted; it is an experiment.
//!
//! `cargo run --release --example large_scale`

use isospec::inverse::{dedup_tolerance, newton_solve, verify_isospectral, NewtonOptions};
use isospec::lyapunov::phi_map;
use isospec::OddPotential;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn main() {
    let direction = [1.0, -0.45];
    let t = 50.0;
    let free: Vec<f64> = direction.iter().map(|x| t * x).collect();
    let q = OddPotential::from_free(&free);
    let k = q.k();
    let target = phi_map(&q);
    let opts = NewtonOptions::default();
    let tol = dedup_tolerance(&q);

    let mut found: Vec<OddPotential> = Vec::new();
    let mut failed = 0;
    for perm in permutations(k) {
        for bits in 0..1u32 << k {
            let seed: Vec<f64> = (0..k)
                .map(|i| {
                    let s = if bits >> i & 1 == 1 { -1.0 } else { 1.0 };
                    s * free[perm[i]]
                })
                .collect();
            match newton_solve(&target, &OddPotential::from_free(&seed), &opts) {
                Ok(sol) => {
                    if !found.iter().any(|m| m.distance(&sol.potential) <= tol) {
                        found.push(sol.potential);
                    }
                }
                Err(e) => {
                    failed += 1;
                    println!("seed {seed:?}: {e}");
                }
            }
        }
    }

    println!("k = {k}, t = {t}, free values {free:?}");
    for m in &found {
        let v = verify_isospectral(m, &q, 1e-6 * t * t);
        println!(
            "  {:>10.6?}  coefficient residual {:.1e}  edges {:.1e}",
            m.free(),
            v.coefficient_residual,
            v.edge_residual
        );
    }
    println!(
        "{} distinct solutions from {} seeds ({failed} failed); 2^k = {}, 2^k k! = {}",
        found.len(),
        (1 << k) * permutations(k).len(),
        1 << k,
        (1 << k) * permutations(k).len()
    );
}
