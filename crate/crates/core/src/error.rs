use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("homogenization degree {m} is below the polynomial degree {degree}")]
    HomogenizationDegree { m: u32, degree: u32 },
    #[error("weight parameter alpha={0} must be at least 1 + 1e-6")]
    InvalidAlpha(f64),
    #[error("exponent p={0} must be finite and positive")]
    InvalidExponent(f64),
    #[error("exact even-p norm needs an even integer exponent, got p={0}")]
    NotEvenExponent(f64),
    #[error("dilation radius {0} lies outside [0, 1]")]
    InvalidRadius(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("integrand is not finite at a quadrature node")]
    NonFiniteIntegrand,
    #[error("tensor quadrature supports at most 3 variables, got {0}")]
    TooManyVariables(usize),
    #[error("monte carlo estimate degenerated: every sample evaluated to zero")]
    DegenerateMonteCarlo,
    #[error("the zero polynomial has no Nikol'skii ratio")]
    ZeroPolynomial,
    #[error("finite-difference stencil around y={0} leaves the admissible range")]
    StencilOutOfRange(f64),
    #[error("pass/fail predicate is not monotone in r across the scan")]
    NonMonotone,
    #[error("expansion of the extremal polynomial is capped at 16 variables, got {0}")]
    ExpansionTooLarge(usize),
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
}
