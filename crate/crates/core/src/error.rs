use thiserror::Error;

/// Errors raised by the spectral and density routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("roots are not distinct: {0}")]
    NonDistinctRoots(String),
    #[error("roots must be given in descending order e1 > e2 > e3, got ({0}, {1}, {2})")]
    UnorderedRoots(f64, f64, f64),
    #[error("exponent {index} must be positive, got {value}")]
    NonPositiveExponent { index: usize, value: f64 },
    #[error("kappa component must be 0 or 1/2, got {0}")]
    BadKappa(f64),
    #[error("degree must be at least 1, got {0}")]
    DegreeTooSmall(usize),
    #[error("off-diagonal product psi[{index}] = {value} is not positive")]
    NonPositivePsi { index: usize, value: f64 },
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("{eig} is not an eigenvalue (relative residual {residual:e})")]
    NotAnEigenvalue { eig: f64, residual: f64 },
    #[error("AGM arguments must be positive, got ({0}, {1})")]
    NonPositiveInput(f64, f64),
    #[error("elliptic modulus {0} outside [0, 1)")]
    ModulusOutOfRange(f64),
    #[error("argument must be nonnegative, got {0}")]
    NegativeInput(f64),
    #[error("hypergeometric argument {0} must be below 1")]
    ArgumentAtOrAboveOne(f64),
    #[error("quadrature did not converge: estimate {estimate}, error {error:e}")]
    QuadratureNotConverged { estimate: f64, error: f64 },
    #[error("invalid quadrature settings: {0}")]
    BadQuadratureSpec(String),
    #[error("omega denominator vanishes at ({0}, {1}, {2})")]
    ZeroDenominator(f64, f64, f64),
    #[error("s = {s} lies outside the support [{lo}, {hi}]")]
    OutOfSupport { s: f64, lo: f64, hi: f64 },
    #[error("s = {0} is at the logarithmic singularity")]
    AtLogSingularity(f64),
    #[error("s = {0} is too close to a singular point for finite differences")]
    TooCloseToSingularity(f64),
    #[error("empty input")]
    EmptyInput,
    #[error("atoms must be distinct, {0} repeats")]
    DuplicateAtoms(f64),
    #[error("bad histogram range: {bins} bins over [{lo}, {hi}]")]
    BadRange { bins: usize, lo: f64, hi: f64 },
    #[error("elliptic degree {n} is inadmissible for kappa sum {kappa_sum}")]
    InadmissibleParity { n: usize, kappa_sum: f64 },
    #[error("polynomial is not monic, leading coefficient {0}")]
    NotMonic(String),
    #[error("coefficient overflow in spectral recurrence")]
    Overflow,
    #[error("root finder did not converge after {0} sweeps")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
