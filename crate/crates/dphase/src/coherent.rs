//! Discrete coherent states and the vacuum-overlap kernel K(η,ξ).
//!
//! The state attached to the grid point (μ,ν) is the vacuum displaced by
//! √N·S(ν,-μ): μ shifts the u-basis (position-like) index, ν the v-basis
//! (momentum-like) one. This label order is what makes the s = -1 mapping
//! kernel equal the projector |μ,ν⟩⟨μ,ν| at the same grid point, and it is
//! the order every phase-space grid in this crate uses.
//!
//! K(η,ξ) = ⟨0,0|η,ξ⟩ is real, strictly positive, even in each label, and
//! symmetric; it is computed once per context from the closed form
//!
//! ```text
//! K(η,ξ) = [ ϑ₃(aη|ia)ϑ₃(aξ|ia) + (-1)^η ϑ₃(aη|ia)ϑ₄(aξ|ia)
//!          + (-1)^ξ ϑ₄(aη|ia)ϑ₃(aξ|ia) + (-1)^{η+ξ+N} ϑ₄(aη|ia)ϑ₄(aξ|ia) ]
//!          / (4 √a 𝒩²)
//! ```
//!
//! and cached, since every mapping-kernel evaluation consumes the full grid.
//! Strict positivity is not proved in general, only that K never vanishes;
//! construction fails with a diagnostic error rather than silently taking a
//! complex branch of K^{-s} if a non-positive value ever shows up.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{fold, Ket};
use crate::space::SpaceContext;
use crate::theta;

/// Cached table of vacuum overlaps K(η,ξ) for η,ξ ∈ [-ℓ,ℓ].
#[derive(Clone, Debug)]
pub struct OverlapTable {
    dim: usize,
    values: Array2<f64>,
    min_value: f64,
}

impl OverlapTable {
    /// 𝒩² = [ϑ₃(0|ia)ϑ₃(0|4ia) + ϑ₄(0|ia)ϑ₂(0|4ia)] / (2√a).
    pub(crate) fn vacuum_norm_sq_closed(a: f64) -> Result<f64> {
        let zero = Complex64::default();
        let tau1 = Complex64::new(0.0, a);
        let tau4 = Complex64::new(0.0, 4.0 * a);
        let tol = theta::DEFAULT_TOL;
        let v = theta::theta3(zero, tau1, tol)? * theta::theta3(zero, tau4, tol)?
            + theta::theta4(zero, tau1, tol)? * theta::theta2(zero, tau4, tol)?;
        Ok(v.re / (2.0 * a.sqrt()))
    }

    pub(crate) fn build(dim: usize, a: f64, norm_sq_closed: f64) -> Result<Self> {
        let n = dim as i64;
        let ell = (n - 1) / 2;
        let tau = Complex64::new(0.0, a);
        let tol = theta::DEFAULT_TOL;

        // The four-term form only needs the two 1D profiles along each axis.
        let mut th3 = vec![0.0; dim];
        let mut th4 = vec![0.0; dim];
        for g in -ell..=ell {
            let z = Complex64::new(a * g as f64, 0.0);
            let v3 = theta::theta3(z, tau, tol)?;
            let v4 = theta::theta4(z, tau, tol)?;
            for (v, name) in [(v3, "theta3 profile"), (v4, "theta4 profile")] {
                if v.im.abs() > 1e-11 * (1.0 + v.norm()) {
                    return Err(Error::ImaginaryResidue {
                        what: if name.starts_with("theta3") {
                            "overlap theta3 profile"
                        } else {
                            "overlap theta4 profile"
                        },
                        residue: v.im.abs(),
                        limit: 1e-11,
                    });
                }
            }
            th3[(g + ell) as usize] = v3.re;
            th4[(g + ell) as usize] = v4.re;
        }

        let scale = 1.0 / (4.0 * a.sqrt() * norm_sq_closed);
        let sign = |k: i64| if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let mut values = Array2::zeros((dim, dim));
        let mut min_value = f64::INFINITY;
        for e in -ell..=ell {
            let (i, se) = ((e + ell) as usize, sign(e));
            for x in -ell..=ell {
                let (j, sx) = ((x + ell) as usize, sign(x));
                let v = scale
                    * (th3[i] * th3[j]
                        + se * th3[i] * th4[j]
                        + sx * th4[i] * th3[j]
                        + se * sx * sign(n) * th4[i] * th4[j]);
                if !v.is_finite() {
                    return Err(Error::OverlapInvalid {
                        reason: format!("non-finite K({e},{x})"),
                    });
                }
                if v <= 0.0 {
                    return Err(Error::OverlapNotPositive {
                        eta: e,
                        xi: x,
                        value: v,
                    });
                }
                values[(i, j)] = v;
                min_value = min_value.min(v);
            }
        }

        let origin = values[(ell as usize, ell as usize)];
        if (origin - 1.0).abs() > 1e-12 {
            return Err(Error::OverlapInvalid {
                reason: format!("K(0,0) = {origin} deviates from 1"),
            });
        }

        Ok(Self {
            dim,
            values,
            min_value,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// K(η,ξ), labels folded mod N.
    pub fn value(&self, eta: i64, xi: i64) -> f64 {
        let ell = (self.dim as i64 - 1) / 2;
        let i = (fold(eta, self.dim) + ell) as usize;
        let j = (fold(xi, self.dim) + ell) as usize;
        self.values[(i, j)]
    }

    /// Elementwise [K(η,ξ)]^{-s} over the full grid via exp(-s ln K); K is
    /// validated real-positive so the principal branch is the only branch.
    pub fn pow_neg(&self, s: Complex64) -> Array2<Complex64> {
        self.values.mapv(|k| (-s * k.ln()).exp())
    }

    pub fn min_value(&self) -> f64 {
        self.min_value
    }
}

impl SpaceContext {
    /// The coherent state |μ,ν⟩ = √N·S(ν,-μ)|0,0⟩ at grid point (μ,ν),
    /// labels folded mod N. Amplitudes:
    /// ⟨u_γ|μ,ν⟩ = exp(iπ(2νγ - μν)/N)·⟨u_{γ-μ}|0,0⟩.
    pub fn coherent_state(&self, mu: i64, nu: i64) -> Ket {
        let (mu, nu) = (self.fold(mu), self.fold(nu));
        let vac = self.vacuum();
        let mut out = Ket::zeros(self.dim());
        for g in self.labels() {
            let phase = self.root(2 * nu * g - mu * nu);
            out.set(g, phase * vac.get(self.fold(g - mu)));
        }
        out
    }

    /// Direct finite-sum form of the overlap building block:
    /// A(μ,ν) = Σ_κ ϑ₃(2aκ|2ia)·ϑ₃(2a(κ+μ)|2ia)·exp(-4πiaκν).
    ///
    /// Reference path used to validate [`SpaceContext::a_closed`]; it costs
    /// O(N) theta evaluations per call where the closed form costs O(1) and
    /// is what production code uses. Labels are taken literally (the
    /// function is exactly N-periodic, which callers may want to observe).
    pub fn a_series(&self, mu: i64, nu: i64) -> Result<Complex64> {
        let a = self.lattice_constant();
        let tau = Complex64::new(0.0, 2.0 * a);
        let tol = theta::DEFAULT_TOL;
        let mut acc = Complex64::default();
        for kappa in self.labels() {
            let f1 = theta::theta3(Complex64::new(2.0 * a * kappa as f64, 0.0), tau, tol)?;
            let f2 = theta::theta3(
                Complex64::new(2.0 * a * (kappa + mu) as f64, 0.0),
                tau,
                tol,
            )?;
            // exp(-4 pi i a kappa nu) = exp(-i pi (2 kappa nu) / N)
            acc += f1 * f2 * self.root(-2 * kappa * nu);
        }
        Ok(acc)
    }

    /// Closed form of A(μ,ν):
    /// exp(2πiaμν)/(4√a) · { ϑ₃(aμ|ia)ϑ₃(aν|ia) + e^{iπμ} ϑ₃(aμ|ia)ϑ₄(aν|ia)
    /// + e^{iπν} ϑ₄(aμ|ia)ϑ₃(aν|ia) + e^{iπ(μ+ν+N)} ϑ₄(aμ|ia)ϑ₄(aν|ia) }.
    pub fn a_closed(&self, mu: i64, nu: i64) -> Result<Complex64> {
        let a = self.lattice_constant();
        let tau = Complex64::new(0.0, a);
        let tol = theta::DEFAULT_TOL;
        let zm = Complex64::new(a * mu as f64, 0.0);
        let zn = Complex64::new(a * nu as f64, 0.0);
        let (t3m, t4m) = (theta::theta3(zm, tau, tol)?, theta::theta4(zm, tau, tol)?);
        let (t3n, t4n) = (theta::theta3(zn, tau, tol)?, theta::theta4(zn, tau, tol)?);
        let sign = |k: i64| if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let braces = t3m * t3n
            + t3m * t4n * sign(mu)
            + t4m * t3n * sign(nu)
            + t4m * t4n * sign(mu + nu + self.dim() as i64);
        // exp(2 pi i a mu nu) = exp(i pi (mu nu) / N)
        Ok(self.root(mu * nu) * braces / (4.0 * a.sqrt()))
    }

    /// Closed-form coherent-state overlap at grid labels:
    /// ⟨η,ξ|μ,ν⟩ = 𝒩^{-2}·exp{2πia[-μν + ηξ + 2η(ν-ξ)]}·A(μ-η, ν-ξ).
    ///
    /// Labels are folded first so the result matches inner products of the
    /// canonical states produced by [`SpaceContext::coherent_state`].
    pub fn overlap_closed(&self, eta: i64, xi: i64, mu: i64, nu: i64) -> Result<Complex64> {
        let (eta, xi) = (self.fold(eta), self.fold(xi));
        let (mu, nu) = (self.fold(mu), self.fold(nu));
        let phase = self.root(-mu * nu + eta * xi + 2 * eta * (nu - xi));
        Ok(phase * self.a_closed(mu - eta, nu - xi)? / self.vacuum_norm_sq_closed())
    }
}
