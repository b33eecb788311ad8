// Float helpers that `core` does not provide.

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

pub(crate) fn log10(x: f64) -> f64 {
    libm::log10(x)
}

pub(crate) fn sinh(x: f64) -> f64 {
    libm::sinh(x)
}

pub(crate) fn powi(x: f64, n: usize) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// `arccosh(x)` for `x >= 1`, written as `log1p(u + sqrt(u² + 2u))` with
/// `u = x - 1` so that heights of order 1e-6 keep full relative precision.
pub(crate) fn acosh_near_one(x: f64) -> f64 {
    let u = (x - 1.0).max(0.0);
    libm::log1p(u + sqrt(u * (u + 2.0)))
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    sqrt(v.iter().map(|x| x * x).sum())
}
