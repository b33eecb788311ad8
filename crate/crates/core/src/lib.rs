//! Spectral toolkit for the discrete Schrödinger operator
//! `(L y)_n = y_{n-1} + y_{n+1} + q_n y_n` with a real periodic potential.
//!
//! The forward direction evaluates the Lyapunov function (Hill discriminant)
//! `Δ(λ, q)`, extracts it as a monic polynomial and computes band edges,
//! critical points and gap heights. The inverse direction works on the odd
//! subspace (period `2k`, `q_{2k+1-n} = -q_n`): the `k` nontrivial
//! coefficients of the even polynomial `Δ(·, q)` form the coefficient map
//! `Φ`, which is inverted by damped Newton iteration to enumerate every odd
//! potential sharing the same spectrum.
//!
//! All public indices are 0-based. Where a quantity is naturally 1-based
//! (band index `n = 1..N`, Fourier mode `m = 1..k`) the docs say so.
//!
//! ```
//! use isospec::{OddPotential, bands::BandStructure};
//!
//! // k = 1, q = (1, -1): Δ(λ) = λ² - 3.
//! let q = OddPotential::from_values(&[1.0, -1.0]).unwrap();
//! let bs = BandStructure::from_potential(q.potential()).unwrap();
//! assert!((bs.heights[0] - 1.5f64.acosh()).abs() < 1e-12);
//! ```

#![no_std]

extern crate alloc;

pub mod asymptotics;
pub mod bands;
pub mod combinatorial;
mod error;
pub mod inverse;
pub mod linalg;
pub mod lyapunov;
pub mod poly;
pub mod potential;
pub mod roots;

pub(crate) mod math;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use lyapunov::{DiscriminantPoly, ExpansionMatrices, PhiVector};
pub use poly::Poly;
pub use potential::{OddPotential, Potential};
