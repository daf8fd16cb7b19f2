use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the phase-space toolkit.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension must be an odd integer in 1..={max}, got {dim}")]
    InvalidDimension { dim: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("theta series requires Im(tau) > 0, got Im(tau) = {im_tau}")]
    ThetaDomain { im_tau: f64 },

    #[error("truncation tolerance must be positive, got {tol}")]
    InvalidTolerance { tol: f64 },

    #[error("theta series exceeded {cap} terms without meeting the tolerance")]
    ThetaTruncation { cap: i64 },

    #[error("theta series produced a non-finite value (z = {z}, tau = {tau})")]
    ThetaOverflow { z: Complex64, tau: Complex64 },

    #[error("order parameter must satisfy |s| <= 1, got s = {s} with |s| = {modulus}")]
    OrderParameterRange { s: Complex64, modulus: f64 },

    #[error("vacuum overlap table failed validation: {reason}")]
    OverlapInvalid { reason: String },

    #[error("vacuum overlap K({eta},{xi}) = {value} is not strictly positive")]
    OverlapNotPositive { eta: i64, xi: i64, value: f64 },

    #[error("{what} has imaginary residue {residue:.3e} above the {limit:.3e} limit")]
    ImaginaryResidue {
        what: &'static str,
        residue: f64,
        limit: f64,
    },

    #[error("density operator is not Hermitian (max |rho - rho^dag| = {residual:.3e})")]
    DensityNotHermitian { residual: f64 },

    #[error("density operator must have unit trace, got {trace}")]
    DensityTrace { trace: Complex64 },

    #[error("window must be positive, got {window}")]
    EmptyWindow { window: f64 },

    #[error("sweep dimensions must be odd and strictly ascending")]
    InvalidSweep,
}

pub type Result<T> = std::result::Result<T, Error>;
