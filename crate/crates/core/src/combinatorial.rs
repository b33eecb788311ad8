//! Expansion of `Δ` as signed sums over parity-constrained index tuples.
//!
//! For a tuple `α = (α_1 < … < α_j)` write `Q_α = Π_s (λ - q_{α_s})`.
//!
//! * `T_j^n`: `1 ≤ α_1`, consecutive gaps odd, and `n+1-α_j` odd.
//! * `D_j^n`: `α_j ≤ n` and consecutive gaps odd, no terminal condition.
//! * `S_r^{m,n}`: chains `m = α_0 < α_1 < … < α_r < α_{r+1} = n` with every
//!   gap odd.
//!
//! `F_j^n = Σ_{T_j^n} Q_α` (`F_0 = 1`) and `G_j^n = Σ_{D_j^n} Q_α`
//! (`G_0 = 2`). Everything is generic over [`Ring`] so that counting
//! identities can be checked in exact integer arithmetic.
//!
//! Sites are 1-based here, matching the tuple entries; `q[i-1]` is `q_i`.

use alloc::vec;
use alloc::vec::Vec;

use crate::lyapunov::DiscriminantPoly;
use crate::poly::{Poly, Ring};
use crate::potential::Potential;
use crate::{Error, Result};

/// Largest `n` for which tuples are enumerated.
pub const ENUMERATION_BUDGET: usize = 20;
/// Largest period for the full combinatorial `Δ`.
pub const DELTA_BUDGET: usize = 16;
/// Largest `n` for the fundamental-solution formulas.
pub const FUNDAMENTAL_BUDGET: usize = 15;

fn check_budget(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::BudgetExceeded { size: n, limit })
    } else {
        Ok(())
    }
}

/// Depth-first extension of strictly increasing tuples of length `j` with
/// entries in `start..=last`, consecutive gaps odd, accepted by `terminal`.
fn enumerate(
    j: usize,
    start: usize,
    last: usize,
    terminal: &dyn Fn(usize) -> bool,
) -> Vec<Vec<usize>> {
    fn extend(
        cur: &mut Vec<usize>,
        j: usize,
        last: usize,
        terminal: &dyn Fn(usize) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == j {
            if cur.last().is_none_or(|&a| terminal(a)) {
                out.push(cur.clone());
            }
            return;
        }
        let mut next = cur[cur.len() - 1] + 1;
        while next <= last {
            cur.push(next);
            extend(cur, j, last, terminal, out);
            cur.pop();
            next += 2;
        }
    }
    let mut out = Vec::new();
    if j == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut cur = Vec::with_capacity(j);
    for first in start..=last {
        cur.push(first);
        extend(&mut cur, j, last, terminal, &mut out);
        cur.pop();
    }
    out
}

/// `T_j^n`, sorted lexicographically. `T_0^n` is the single empty tuple.
pub fn enumerate_t(j: usize, n: usize) -> Result<Vec<Vec<usize>>> {
    check_budget(n, ENUMERATION_BUDGET)?;
    if j > n {
        return Ok(Vec::new());
    }
    Ok(enumerate(j, 1, n, &|a| (n + 1 - a) % 2 == 1))
}

/// `D_j^n`, sorted lexicographically.
pub fn enumerate_d(j: usize, n: usize) -> Result<Vec<Vec<usize>>> {
    check_budget(n, ENUMERATION_BUDGET)?;
    if j > n {
        return Ok(Vec::new());
    }
    Ok(enumerate(j, 1, n, &|_| true))
}

/// `E_j^{n+1} = {(ρ, n+2) : ρ ∈ T_{j-1}^{n+1}}`, given `n`.
pub fn enumerate_e(j: usize, n: usize) -> Result<Vec<Vec<usize>>> {
    assert!(j >= 1);
    let mut out = enumerate_t(j - 1, n + 1)?;
    for t in &mut out {
        t.push(n + 2);
    }
    Ok(out)
}

/// Chains in `S_r^{m,n}`, each including its fixed endpoints `m` and `n`.
pub fn enumerate_s(m: usize, n: usize, r: usize) -> Result<Vec<Vec<usize>>> {
    check_budget(n, ENUMERATION_BUDGET)?;
    if n <= m || r >= n - m {
        return Err(Error::InvalidRange);
    }
    let mut out = Vec::new();
    let mut cur = vec![m];
    fn extend(cur: &mut Vec<usize>, n: usize, r: usize, out: &mut Vec<Vec<usize>>) {
        let last = *cur.last().unwrap();
        if cur.len() == r + 1 {
            if (n - last) % 2 == 1 {
                let mut chain = cur.clone();
                chain.push(n);
                out.push(chain);
            }
            return;
        }
        let mut next = last + 1;
        while next < n {
            cur.push(next);
            extend(cur, n, r, out);
            cur.pop();
            next += 2;
        }
    }
    extend(&mut cur, n, r, &mut out);
    Ok(out)
}

/// `#T_j^n` by dynamic programming over the last entry; exact.
pub fn count_t(j: usize, n: usize) -> u128 {
    if j == 0 {
        return 1;
    }
    if j > n {
        return 0;
    }
    // ways[a] = number of valid prefixes of the current length ending at a.
    let mut ways = vec![1u128; n + 1];
    ways[0] = 0;
    for _ in 1..j {
        ways = (0..=n)
            .map(|b| (1..b).filter(|a| (b - a) % 2 == 1).map(|a| ways[a]).sum())
            .collect();
    }
    (1..=n)
        .filter(|a| (n + 1 - a) % 2 == 1)
        .map(|a| ways[a])
        .sum()
}

/// `#S_r^{m,n}`: `#T_r^{n-m-1}` when `n-m-r` is odd, otherwise 0.
pub fn count_s(m: usize, n: usize, r: usize) -> Result<u128> {
    if n <= m || r >= n - m {
        return Err(Error::InvalidRange);
    }
    if (n - m - r) % 2 == 1 {
        Ok(count_t(r, n - m - 1))
    } else {
        Ok(0)
    }
}

fn q_alpha<T: Ring>(alpha: &[usize], q: &[T]) -> Poly<T> {
    alpha
        .iter()
        .fold(Poly::one(), |acc, &a| acc.mul_shifted_identity(q[a - 1]))
}

fn check_sites<T>(n: usize, q: &[T]) -> Result<()> {
    if q.len() < n {
        Err(Error::LengthMismatch {
            expected: n,
            found: q.len(),
        })
    } else {
        Ok(())
    }
}

pub fn poly_f<T: Ring>(j: usize, n: usize, q: &[T]) -> Result<Poly<T>> {
    check_sites(n, q)?;
    let set = enumerate_t(j, n)?;
    Ok(set
        .iter()
        .fold(Poly::zero(), |acc, a| &acc + &q_alpha(a, q)))
}

pub fn poly_g<T: Ring>(j: usize, n: usize, q: &[T]) -> Result<Poly<T>> {
    check_sites(n, q)?;
    if j == 0 {
        return Ok(Poly::constant(T::ONE + T::ONE));
    }
    let set = enumerate_d(j, n)?;
    Ok(set
        .iter()
        .fold(Poly::zero(), |acc, a| &acc + &q_alpha(a, q)))
}

fn signed(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `Δ` as an alternating sum of `G_j^{N+1}`.
///
/// Even period `N+1 = 2k`: `Σ_{j=0}^{k} (-1)^{j+k} G_{2j}`.
/// Odd period `N+1 = 2k+1`: `Σ_{j=0}^{k} (-1)^{j+k} G_{2j+1}`.
pub fn delta_combinatorial_generic<T: Ring>(q: &[T]) -> Result<Poly<T>> {
    let p = q.len();
    check_budget(p, DELTA_BUDGET)?;
    if p < 2 {
        return Err(Error::InvalidPeriod(p));
    }
    let k = p / 2;
    let offset = p % 2;
    let mut acc = Poly::zero();
    for j in 0..=k {
        let g = poly_g(2 * j + offset, p, q)?;
        acc = &acc + &g.scale(T::from_i64(signed(j + k)));
    }
    Ok(acc.padded(p + 1))
}

pub fn delta_combinatorial(q: &Potential) -> Result<DiscriminantPoly> {
    let poly = delta_combinatorial_generic(q.values())?;
    Ok(DiscriminantPoly::from_coeffs(poly.into_coeffs()).expect("monic by construction"))
}

/// `(φ_{n+1}, θ_{n+1})` from signed sums of `F_j^n`.
///
/// `n` even: `φ = (-1)^{n/2} Σ_{j=0}^{n/2} (-1)^j F_{2j}`,
/// `θ = (-1)^{n/2} Σ_{j=0}^{n/2-1} (-1)^j F_{2j+1}`.
/// `n` odd: `φ = (-1)^{(n-1)/2} Σ_{j=0}^{(n-1)/2} (-1)^j F_{2j+1}`,
/// `θ = (-1)^{(n+1)/2} Σ_{j=0}^{(n-1)/2} (-1)^j F_{2j}`.
/// For `n = 0` this returns `(φ_1, θ_1) = (1, 0)`.
pub fn fundamental_combinatorial<T: Ring>(n: usize, q: &[T]) -> Result<(Poly<T>, Poly<T>)> {
    check_budget(n, FUNDAMENTAL_BUDGET)?;
    check_sites(n, q)?;
    if n == 0 {
        return Ok((Poly::one(), Poly::zero()));
    }
    let sum = |first: usize, count: usize, outer: usize| -> Result<Poly<T>> {
        let mut acc = Poly::zero();
        for j in 0..count {
            let f = poly_f(2 * j + first, n, q)?;
            acc = &acc + &f.scale(T::from_i64(signed(j + outer)));
        }
        Ok(acc)
    };
    if n.is_multiple_of(2) {
        let h = n / 2;
        Ok((sum(0, h + 1, h)?, sum(1, h, h)?))
    } else {
        let h = (n - 1) / 2;
        Ok((sum(1, h + 1, h)?, sum(0, h + 1, h + 1)?))
    }
}
