//! Jacobi theta functions ϑ₂, ϑ₃, ϑ₄ for complex first argument and lattice
//! parameter with positive imaginary part.
//!
//! Conventions (series over all integers α):
//!
//! ```text
//! ϑ₃(z|τ) = Σ exp(iπτ α² + 2πi z α)
//! ϑ₂(z|τ) = Σ exp(iπτ (α+½)² + 2πi z (α+½))
//! ϑ₄(z|τ) = ϑ₃(z + ½ | τ)
//! ```
//!
//! The sum is centered on the index with the largest term modulus before
//! truncation. Arguments like ϑ₃(iμ | 2iN) put that peak far from α = 0, where
//! a zero-centered truncation would silently drop everything that matters.
//!
//! All evaluation is in double precision; do not expect better than about
//! 1e-13 relative accuracy near the tolerance floor.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Hard cap on the half-width of the summation window.
const TERM_CAP: i64 = 1_000_000;

/// Number of consecutive below-threshold wing terms required to stop.
const QUIET_STREAK: u32 = 3;

/// Default absolute truncation tolerance used by internal callers.
pub const DEFAULT_TOL: f64 = 1e-14;

fn check_params(z: Complex64, tau: Complex64, tol: f64) -> Result<()> {
    if !(tau.im > 0.0) {
        return Err(Error::ThetaDomain { im_tau: tau.im });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance { tol });
    }
    if !z.is_finite() || !tau.is_finite() {
        return Err(Error::ThetaOverflow { z, tau });
    }
    Ok(())
}

/// Sums exp(iπτ (α+offset)² + 2πi z (α+offset)) over α ∈ ℤ.
///
/// `offset` is 0 for ϑ₃ and ½ for ϑ₂. The center α₀ maximizes the term
/// modulus exp(-π Im(τ) x² - 2π Im(z) x) at x = α+offset; summation expands
/// outward from it and stops once both wings stay below tol·10⁻² for
/// [`QUIET_STREAK`] consecutive steps.
fn lattice_sum(z: Complex64, tau: Complex64, tol: f64, offset: f64) -> Result<Complex64> {
    check_params(z, tau, tol)?;
    let center = -z.im / tau.im;
    let alpha0 = (center - offset).round();

    let term = |alpha: f64| -> Complex64 {
        let x = alpha + offset;
        (Complex64::i() * (PI * tau * x * x + 2.0 * PI * z * x)).exp()
    };

    let threshold = tol * 1e-2;
    let mut sum = term(alpha0);
    let mut streak = 0u32;
    let mut m: i64 = 1;
    loop {
        let hi = term(alpha0 + m as f64);
        let lo = term(alpha0 - m as f64);
        sum += hi + lo;
        if hi.norm().max(lo.norm()) < threshold {
            streak += 1;
            if streak >= QUIET_STREAK {
                break;
            }
        } else {
            streak = 0;
        }
        m += 1;
        if m > TERM_CAP {
            return Err(Error::ThetaTruncation { cap: TERM_CAP });
        }
    }
    if !sum.is_finite() {
        return Err(Error::ThetaOverflow { z, tau });
    }
    Ok(sum)
}

/// ϑ₃(z|τ) = Σ_α exp(iπτ α² + 2πi z α), Im(τ) > 0.
pub fn theta3(z: Complex64, tau: Complex64, tol: f64) -> Result<Complex64> {
    lattice_sum(z, tau, tol, 0.0)
}

/// ϑ₂(z|τ) = Σ_α exp(iπτ (α+½)² + 2πi z (α+½)), Im(τ) > 0.
pub fn theta2(z: Complex64, tau: Complex64, tol: f64) -> Result<Complex64> {
    lattice_sum(z, tau, tol, 0.5)
}

/// ϑ₄(z|τ) = ϑ₃(z+½|τ), Im(τ) > 0.
pub fn theta4(z: Complex64, tau: Complex64, tol: f64) -> Result<Complex64> {
    theta3(z + 0.5, tau, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Zero-centered brute-force reference, wide fixed window.
    fn brute3(z: Complex64, tau: Complex64, half_width: i64) -> Complex64 {
        (-half_width..=half_width)
            .map(|a| {
                let x = a as f64;
                (Complex64::i() * (PI * tau * x * x + 2.0 * PI * z * x)).exp()
            })
            .sum()
    }

    fn brute2(z: Complex64, tau: Complex64, half_width: i64) -> Complex64 {
        (-half_width..=half_width)
            .map(|a| {
                let x = a as f64 + 0.5;
                (Complex64::i() * (PI * tau * x * x + 2.0 * PI * z * x)).exp()
            })
            .sum()
    }

    #[test]
    fn theta3_single_dominant_term() {
        // tau = 10i: correction 2 e^{-10 pi} ~ 4.6e-14 on top of 1
        let v = theta3(c(0.0, 0.0), c(0.0, 10.0), 1e-14).unwrap();
        let want = 1.0 + 2.0 * (-10.0 * PI).exp();
        assert_relative_eq!(v.re, want, max_relative = 1e-15);
        assert!(v.im.abs() < 1e-16);
    }

    #[test]
    fn theta3_half_shift_is_theta4() {
        let tau = c(0.0, 1.0);
        let lhs = theta3(c(0.5, 0.0), tau, 1e-13).unwrap();
        let rhs = theta4(c(0.0, 0.0), tau, 1e-13).unwrap();
        assert!((lhs - rhs).norm() < 1e-15);
    }

    #[test]
    fn theta3_unit_lattice_value() {
        // Brute-force series with |alpha| <= 12; terms below 1e-40 there.
        let brute = brute3(c(0.0, 0.0), c(0.0, 1.0), 12);
        let v = theta3(c(0.0, 0.0), c(0.0, 1.0), 1e-13).unwrap();
        assert_relative_eq!(v.re, brute.re, max_relative = 1e-14);
        assert_relative_eq!(v.re, 1.086434811213308, max_relative = 1e-14);
    }

    #[test]
    fn theta2_two_dominant_terms() {
        // alpha = 0 and alpha = -1 contribute e^{-2.5 pi} each
        let v = theta2(c(0.0, 0.0), c(0.0, 10.0), 1e-14).unwrap();
        let want = 2.0 * (-2.5 * PI).exp();
        assert_relative_eq!(v.re, want, max_relative = 1e-13);
    }

    #[test]
    fn theta2_half_period_relation() {
        // th3(z + tau/2 | tau) = exp(-i pi tau/4 - i pi z) th2(z | tau)
        let (z, tau) = (c(0.3, 0.0), c(0.0, 0.7));
        let lhs = theta3(z + tau / 2.0, tau, 1e-14).unwrap();
        let rhs = (-Complex64::i() * PI * (tau / 4.0 + z)).exp() * theta2(z, tau, 1e-14).unwrap();
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-12);
    }

    #[test]
    fn theta2_against_brute_force() {
        // a = 1/10, tau = 4ia
        let v = theta2(c(0.0, 0.0), c(0.0, 0.4), 1e-13).unwrap();
        let brute = brute2(c(0.0, 0.0), c(0.0, 0.4), 20);
        assert_relative_eq!(v.re, brute.re, max_relative = 1e-14);
        assert_relative_eq!(v.re, 1.579911223764878, max_relative = 1e-13);
    }

    #[test]
    fn theta4_leading_terms() {
        let v = theta4(c(0.0, 0.0), c(0.0, 10.0), 1e-14).unwrap();
        let want = 1.0 - 2.0 * (-10.0 * PI).exp();
        assert_relative_eq!(v.re, want, max_relative = 1e-15);
    }

    #[test]
    fn theta4_quasi_periodicity() {
        // th4(z + m tau | tau) = exp(-i pi tau m^2 - 2 pi i m z + i pi m) th4(z | tau)
        let (z, tau, m) = (c(0.2, 0.0), c(0.0, 0.5), 1.0);
        let lhs = theta4(z + m * tau, tau, 1e-14).unwrap();
        let phase = (Complex64::i() * PI * (-tau * m * m - 2.0 * m * z + m)).exp();
        let rhs = phase * theta4(z, tau, 1e-14).unwrap();
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-12);
    }

    #[test]
    fn theta4_unit_lattice_value() {
        let brute = brute3(c(0.5, 0.0), c(0.0, 1.0), 12);
        let v = theta4(c(0.0, 0.0), c(0.0, 1.0), 1e-13).unwrap();
        assert_relative_eq!(v.re, brute.re, max_relative = 1e-14);
        assert_relative_eq!(v.re, 0.9135791381561168, max_relative = 1e-14);
    }

    #[test]
    fn centered_summation_handles_shifted_peak() {
        // z = 3i, tau = 0.5i puts the dominant term at alpha = 6; a
        // zero-centered window of the same width misses the peak entirely.
        let (z, tau) = (c(0.0, 3.0), c(0.0, 0.5));
        let v = theta3(z, tau, 1e-13).unwrap();
        let brute = brute3(z, tau, 40);
        assert!((v - brute).norm() / brute.norm() < 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            theta3(c(0.0, 0.0), c(1.0, 0.0), 1e-13),
            Err(Error::ThetaDomain { .. })
        ));
        assert!(matches!(
            theta3(c(0.0, 0.0), c(0.0, -1.0), 1e-13),
            Err(Error::ThetaDomain { .. })
        ));
        assert!(matches!(
            theta2(c(0.0, 0.0), c(0.0, 1.0), 0.0),
            Err(Error::InvalidTolerance { .. })
        ));
    }

    #[test]
    fn parity_in_first_argument() {
        let (z, tau) = (c(0.37, 0.11), c(0.2, 0.9));
        let plus = theta3(z, tau, 1e-14).unwrap();
        let minus = theta3(-z, tau, 1e-14).unwrap();
        assert!((plus - minus).norm() / plus.norm() < 1e-13);
    }
}
