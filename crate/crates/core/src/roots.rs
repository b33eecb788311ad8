//! Bracketing root finders for real-rooted polynomials.

use alloc::vec::Vec;

use crate::poly::Poly;
use crate::{Error, Result};

pub const MAX_BISECTION_ITERS: usize = 200;

/// Default relative bracket width at which bisection stops.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Finds a root of `f` in `[lo, hi]`.
///
/// Bisection runs until the bracket is narrower than `tol·(1+|λ|)`, then one
/// secant step inside the final bracket. When `f` has the same sign at both
/// ends the endpoint with the smaller `|f|` is returned: callers use this for
/// double roots sitting exactly on a bracket end (closed gaps).
pub fn bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if (fa > 0.0) == (fb > 0.0) {
        return Ok(if fa.abs() <= fb.abs() { a } else { b });
    }
    for _ in 0..MAX_BISECTION_ITERS {
        let mid = 0.5 * (a + b);
        if b - a <= tol * (1.0 + mid.abs()) {
            let x = a - fa * (b - a) / (fb - fa);
            return Ok(x.clamp(a, b));
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    Err(Error::BisectionFailed { lo, hi })
}

/// Cauchy bound: every root of `p` has modulus below the returned value.
pub fn cauchy_bound(p: &Poly<f64>) -> f64 {
    let Some(d) = p.degree() else {
        return 1.0;
    };
    let lead = p.coeff(d);
    let m = (0..d).fold(0.0f64, |m, i| m.max((p.coeff(i) / lead).abs()));
    1.0 + m
}

/// All real roots of `p`, ascending, by the derivative chain.
///
/// The roots of `p'` split the line into intervals on which `p` is monotone;
/// each interval with a sign change holds exactly one root. This finds every
/// root when `p` is real-rooted. Roots closer than `tol·(1+|λ|)` are merged.
pub fn real_roots(p: &Poly<f64>, tol: f64) -> Result<Vec<f64>> {
    let p = p.clone().trimmed();
    let Some(d) = p.degree() else {
        return Ok(Vec::new());
    };
    if d == 0 {
        return Ok(Vec::new());
    }
    if d == 1 {
        return Ok(alloc::vec![-p.coeff(0) / p.coeff(1)]);
    }
    let bound = cauchy_bound(&p);
    let critical = real_roots(&p.derivative(), tol)?;
    real_roots_between(|x| p.eval(x), &critical, bound, tol)
}

/// Roots of a function that is monotone between consecutive `critical`
/// points and beyond them up to `±bound`.
pub fn real_roots_between(
    f: impl Fn(f64) -> f64,
    critical: &[f64],
    bound: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    let mut nodes = Vec::with_capacity(critical.len() + 2);
    nodes.push(-bound);
    nodes.extend(critical.iter().copied().filter(|c| c.abs() < bound));
    nodes.push(bound);

    let mut roots: Vec<f64> = Vec::new();
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (f(a), f(b));
        if fa != 0.0 && fb != 0.0 && (fa > 0.0) == (fb > 0.0) {
            continue;
        }
        let r = bisect(&f, a, b, tol)?;
        match roots.last() {
            Some(&last) if (r - last).abs() <= tol * (1.0 + r.abs()) => {}
            _ => roots.push(r),
        }
    }
    Ok(roots)
}
