use std::path::PathBuf;

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("element is not hyperbolic (|tr| = {trace})")]
    NotHyperbolic { trace: f64 },
    #[error("geodesics share an ideal endpoint at {0}")]
    SharedEndpoint(f64),
    #[error("length must be positive, got {0}")]
    NonPositiveLength(f64),
    #[error("pole at non-positive integer {0}")]
    PoleAtNonPositiveInteger(Complex64),
    #[error("Riemann zeta pole at s = 1")]
    PoleAtOne,
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("quadrature budget exceeded: estimate {estimate} with error {error:e}")]
    BudgetExceeded { estimate: Complex64, error: f64 },
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("spectrum incomplete beyond L_max = {l_max} (requested {requested})")]
    IncompleteSpectrum { l_max: f64, requested: f64 },
    #[error("truncation tail {tail:e} exceeds tolerance {tol:e}")]
    TailTooLarge { value: Complex64, tail: f64, tol: f64 },
    #[error("pole or zero of the topological factor at {0}")]
    PoleOrZero(Complex64),
    #[error("pole at s = 1/2")]
    PoleAtHalf,
    #[error("digamma pole at {0}")]
    DigammaPole(Complex64),
    #[error("function vanishes at {0}")]
    AtZero(Complex64),
    #[error("s = {0} lies outside the Euler product convergence region")]
    OutOfConvergenceRegion(Complex64),
    #[error("zero on or near the contour (edge {edge}); perturb the box")]
    ZeroOnBoundary { edge: usize },
    #[error("winding number {0} is not close to an integer")]
    NonIntegerWinding(f64),
    #[error("Newton polishing failed in box {0:?}")]
    ConvergenceFailure([f64; 4]),
    #[error("asymptotic fit ill-conditioned (residual {0:e})")]
    IllConditionedFit(f64),
    #[error("inconsistent order data: empty Euler characteristic range")]
    EmptyRange,
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("parse error at byte {offset}: {message}")]
    ParseError { offset: usize, message: String },
    #[error("i/o error on {path:?}: {message}")]
    Io { path: PathBuf, message: String },
}
