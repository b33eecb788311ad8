use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the spectral routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A potential needs period at least 2.
    InvalidPeriod(usize),
    /// A Fourier mode or other index fell outside its valid range.
    IndexOutOfRange { index: usize, len: usize },
    /// Sequence lengths that must agree did not.
    LengthMismatch { expected: usize, found: usize },
    /// The values of a potential do not sum to zero.
    NotZeroMean { residual: f64 },
    /// The values are not antisymmetric under `n -> N+2-n`.
    NotOdd { residual: f64 },
    /// An enumeration was asked for a size beyond its budget.
    BudgetExceeded { size: usize, limit: usize },
    /// Parameters outside the domain of a counting identity.
    InvalidRange,
    /// Root isolation found the wrong number of real roots.
    RootCountMismatch { expected: usize, found: usize },
    /// Bisection did not reach its tolerance within the iteration cap.
    BisectionFailed { lo: f64, hi: f64 },
    /// `(-1)^{N+1-n} Δ(λ_n)` fell below 2 at a critical point.
    SignPatternViolated { band: usize, value: f64 },
    /// `Δ''` vanishes at a critical point.
    DegenerateCritical { band: usize },
    /// A gap is closed where an open gap is required.
    ClosedGap { band: usize },
    /// A Fourier coordinate vanishes where the asymptotics need it nonzero.
    PredictionDegenerate { mode: usize },
    /// A scale grid is empty, non-monotone or out of range.
    InvalidGrid,
    /// Newton hit a Jacobian with `|det|` below the singular threshold.
    SingularJacobian { det: f64 },
    /// Newton ran out of iterations or step halvings.
    NoConvergence { iterations: usize, residual: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPeriod(p) => write!(f, "period {p} is too small, need at least 2"),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for size {len}")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} values, found {found}")
            }
            Error::NotZeroMean { residual } => {
                write!(f, "potential does not have zero mean (sum = {residual:e})")
            }
            Error::NotOdd { residual } => {
                write!(
                    f,
                    "potential is not odd (antisymmetry residual {residual:e})"
                )
            }
            Error::BudgetExceeded { size, limit } => {
                write!(f, "size {size} exceeds the enumeration budget {limit}")
            }
            Error::InvalidRange => write!(f, "parameters outside the valid range"),
            Error::RootCountMismatch { expected, found } => {
                write!(f, "expected {expected} real roots, isolated {found}")
            }
            Error::BisectionFailed { lo, hi } => {
                write!(f, "bisection did not converge on [{lo}, {hi}]")
            }
            Error::SignPatternViolated { band, value } => {
                write!(
                    f,
                    "critical value of band {band} violates the sign pattern: {value}"
                )
            }
            Error::DegenerateCritical { band } => {
                write!(f, "second derivative vanishes at critical point {band}")
            }
            Error::ClosedGap { band } => write!(f, "gap {band} is closed"),
            Error::PredictionDegenerate { mode } => {
                write!(f, "Fourier coordinate {mode} vanishes")
            }
            Error::InvalidGrid => {
                write!(f, "scale grid must be strictly decreasing within (0, 0.3]")
            }
            Error::SingularJacobian { det } => write!(f, "singular Jacobian (det = {det:e})"),
            Error::NoConvergence {
                iterations,
                residual,
            } => write!(
                f,
                "Newton did not converge after {iterations} iterations (residual {residual:e})"
            ),
        }
    }
}

impl core::error::Error for Error {}
