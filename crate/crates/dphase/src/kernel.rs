//! The s-parametrized mapping kernel family T⁽ˢ⁾(μ,ν), the operator ↔
//! phase-space maps built on it, and the smoothing/folding relations that
//! connect different orderings.
//!
//! ```text
//! T⁽ˢ⁾(μ,ν) = (1/N) Σ_{η,ξ} U^η V^ξ exp[-2πi(ημ+ξν)/N] exp(iπηξ/N) [K(η,ξ)]^{-s}
//! ```
//!
//! with |s| ≤ 1. The map F(μ,ν) = Tr[T⁽ˢ⁾(μ,ν)·O] and the synthesis
//! O = (1/N) Σ F(μ,ν)·T⁽⁻ˢ⁾(μ,ν) are mutually inverse; s = 0, -1, +1
//! reproduce the Wigner, Husimi and Glauber-Sudarshan distributions of a
//! density operator.
//!
//! Because U^η V^ξ has a single nonzero per column, a kernel entry is a
//! single η-sum: grid maps and reconstructions run in O(N³) + O(N⁴) without
//! ever materializing kernels, and one materialized kernel costs O(N²) given
//! the per-family table g(ξ,d) = Σ_η exp(2πiηd/N) exp(iπηξ/N) K^{-s}(η,ξ).
//! A fully materialized family is N² kernels of N² entries — O(N⁴) memory —
//! which is the scaling wall that caps full verification suites near N = 21.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::operator::{LabelPair, Operator};
use crate::space::SpaceContext;

/// Imaginary-part budget for grids that must come out real.
const GRID_IMAG_LIMIT: f64 = 1e-11;

/// The complex order parameter s with |s| ≤ 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderParameter(Complex64);

impl OrderParameter {
    /// Wigner ordering, s = 0.
    pub const WIGNER: Self = Self(Complex64::new(0.0, 0.0));
    /// Husimi ordering, s = -1.
    pub const HUSIMI: Self = Self(Complex64::new(-1.0, 0.0));
    /// Glauber-Sudarshan ordering, s = +1.
    pub const GLAUBER_SUDARSHAN: Self = Self(Complex64::new(1.0, 0.0));

    pub fn new(s: Complex64) -> Result<Self> {
        let modulus = s.norm();
        if !(modulus <= 1.0 + 1e-12) {
            return Err(Error::OrderParameterRange { s, modulus });
        }
        Ok(Self(s))
    }

    pub fn real(s: f64) -> Result<Self> {
        Self::new(Complex64::new(s, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn conj(self) -> Self {
        Self(self.0.conj())
    }

    pub fn neg(self) -> Self {
        Self(-self.0)
    }

    pub fn is_real(self) -> bool {
        self.0.im == 0.0
    }
}

impl std::fmt::Display for OrderParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.im == 0.0 {
            write!(f, "{}", self.0.re)
        } else {
            write!(f, "{}{:+}i", self.0.re, self.0.im)
        }
    }
}

/// An N×N grid of phase-space values F(μ,ν), tagged with the order
/// parameter it was produced under.
#[derive(Clone, Debug)]
pub struct PhaseGrid {
    dim: usize,
    order: OrderParameter,
    values: Array2<Complex64>,
}

impl PhaseGrid {
    pub fn new(dim: usize, order: OrderParameter, values: Array2<Complex64>) -> Result<Self> {
        if values.dim() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: values.dim().0,
            });
        }
        Ok(Self { dim, order, values })
    }

    /// A grid with every value equal to `value`.
    pub fn constant(dim: usize, order: OrderParameter, value: Complex64) -> Self {
        Self {
            dim,
            order,
            values: Array2::from_elem((dim, dim), value),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> OrderParameter {
        self.order
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    fn idx(&self, g: i64) -> usize {
        ((g + (self.dim as i64 - 1) / 2) as usize) % self.dim
    }

    /// F(μ,ν), labels folded mod N.
    pub fn get(&self, mu: i64, nu: i64) -> Complex64 {
        let mu = crate::operator::fold(mu, self.dim);
        let nu = crate::operator::fold(nu, self.dim);
        self.values[(self.idx(mu), self.idx(nu))]
    }

    /// (1/N)·Σ F(μ,ν); equals Tr(O) for a grid mapped from O.
    pub fn normalized_sum(&self) -> Complex64 {
        self.values.sum() / self.dim as f64
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn min_real(&self) -> f64 {
        self.values.iter().map(|v| v.re).fold(f64::INFINITY, f64::min)
    }
}

/// Lazily materialized kernel family at a fixed order parameter. Thread-safe:
/// first access to a grid point builds the kernel once, later accesses share
/// it.
pub struct KernelFamily<'a> {
    ctx: &'a SpaceContext,
    order: OrderParameter,
    // g(ξ, d) = Σ_η exp(2πiηd/N) exp(iπηξ/N) K^{-s}(η,ξ), indexed [ξ+ℓ, d+ℓ]
    g_table: Array2<Complex64>,
    slots: Vec<OnceLock<Operator>>,
}

impl<'a> KernelFamily<'a> {
    pub fn new(ctx: &'a SpaceContext, order: OrderParameter) -> Self {
        let n = ctx.dim();
        let pow = ctx.overlap_table().pow_neg(order.value());
        let mut g_table = Array2::zeros((n, n));
        for xi in ctx.labels() {
            for d in ctx.labels() {
                let mut acc = Complex64::default();
                for eta in ctx.labels() {
                    acc += ctx.root(2 * eta * d + eta * xi) * pow[(ctx.idx(eta), ctx.idx(xi))];
                }
                g_table[(ctx.idx(xi), ctx.idx(d))] = acc;
            }
        }
        let slots = (0..n * n).map(|_| OnceLock::new()).collect();
        Self {
            ctx,
            order,
            g_table,
            slots,
        }
    }

    pub fn order(&self) -> OrderParameter {
        self.order
    }

    pub fn context(&self) -> &SpaceContext {
        self.ctx
    }

    fn build_kernel(&self, mu: i64, nu: i64) -> Operator {
        let ctx = self.ctx;
        let n = ctx.dim() as f64;
        let mut t = Operator::zeros(ctx.dim());
        for row in ctx.labels() {
            for col in ctx.labels() {
                let xi = ctx.fold(col - row);
                let d = ctx.fold(row - mu);
                let v = ctx.root(-2 * xi * nu) * self.g_table[(ctx.idx(xi), ctx.idx(d))] / n;
                t.set(row, col, v);
            }
        }
        t
    }

    /// T⁽ˢ⁾(μ,ν), built on first access and cached. Labels fold mod N.
    pub fn kernel(&self, mu: i64, nu: i64) -> &Operator {
        let (mu, nu) = (self.ctx.fold(mu), self.ctx.fold(nu));
        let slot = self.ctx.idx(mu) * self.ctx.dim() + self.ctx.idx(nu);
        self.slots[slot].get_or_init(|| self.build_kernel(mu, nu))
    }
}

/// One-shot T⁽ˢ⁾(μ,ν) without a family cache.
pub fn kernel_t(ctx: &SpaceContext, s: OrderParameter, mu: i64, nu: i64) -> Operator {
    KernelFamily::new(ctx, s).build_kernel(ctx.fold(mu), ctx.fold(nu))
}

/// Tr[U^η V^ξ · O] = Σ_γ exp(2πiηγ/N)·O[γ+ξ, γ], one entry of O per γ.
fn trace_uv(ctx: &SpaceContext, op: &Operator, eta: i64, xi: i64) -> Complex64 {
    let mut acc = Complex64::default();
    for g in ctx.labels() {
        acc += ctx.root(2 * eta * g) * op.get(ctx.fold(g + xi), g);
    }
    acc
}

/// Phase-space map F(μ,ν) = Tr[T⁽ˢ⁾(μ,ν)·O] over the full grid.
pub fn map_operator(ctx: &SpaceContext, op: &Operator, s: OrderParameter) -> Result<PhaseGrid> {
    if op.dim() != ctx.dim() {
        return Err(Error::DimensionMismatch {
            expected: ctx.dim(),
            got: op.dim(),
        });
    }
    let n = ctx.dim();
    let pow = ctx.overlap_table().pow_neg(s.value());

    // X(η,ξ) = exp(iπηξ/N)·K^{-s}(η,ξ)·Tr[U^η V^ξ O]; F is (1/N)·DFT(X).
    let mut weighted = Array2::zeros((n, n));
    for eta in ctx.labels() {
        for xi in ctx.labels() {
            weighted[(ctx.idx(eta), ctx.idx(xi))] = ctx.root(eta * xi)
                * pow[(ctx.idx(eta), ctx.idx(xi))]
                * trace_uv(ctx, op, eta, xi);
        }
    }

    let rows: Vec<Vec<Complex64>> = ctx
        .labels()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|mu| {
            ctx.labels()
                .map(|nu| {
                    let mut acc = Complex64::default();
                    for eta in ctx.labels() {
                        for xi in ctx.labels() {
                            acc += ctx.root(-2 * (eta * mu + xi * nu))
                                * weighted[(ctx.idx(eta), ctx.idx(xi))];
                        }
                    }
                    acc / n as f64
                })
                .collect()
        })
        .collect();

    let mut values = Array2::zeros((n, n));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            values[(i, j)] = v;
        }
    }
    PhaseGrid::new(n, s, values)
}

/// Synthesis O = (1/N)·Σ_{μ,ν} F(μ,ν)·T⁽ˢ⁾(μ,ν).
///
/// Inverts [`map_operator`] when the grid was produced at the dual parameter
/// -s; honoring that pairing is the caller's contract.
pub fn reconstruct(ctx: &SpaceContext, grid: &PhaseGrid, s: OrderParameter) -> Result<Operator> {
    if grid.dim() != ctx.dim() {
        return Err(Error::DimensionMismatch {
            expected: ctx.dim(),
            got: grid.dim(),
        });
    }
    let n = ctx.dim();
    let pow = ctx.overlap_table().pow_neg(s.value());

    // hat(η,ξ) = Σ_{μ,ν} F(μ,ν) exp(-2πi(ημ+ξν)/N)
    let labels: Vec<i64> = ctx.labels().collect();
    let hat_rows: Vec<Vec<Complex64>> = labels
        .par_iter()
        .map(|&eta| {
            ctx.labels()
                .map(|xi| {
                    let mut acc = Complex64::default();
                    for mu in ctx.labels() {
                        for nu in ctx.labels() {
                            acc += grid.get(mu, nu) * ctx.root(-2 * (eta * mu + xi * nu));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();

    // O = (1/N²)·Σ_{η,ξ} hat(η,ξ)·exp(iπηξ/N)·K^{-s}(η,ξ)·U^η V^ξ
    let scale = 1.0 / (n * n) as f64;
    let mut out = Operator::zeros(n);
    for (i, eta) in labels.iter().copied().enumerate() {
        for (j, xi) in labels.iter().copied().enumerate() {
            let coeff = hat_rows[i][j] * ctx.root(eta * xi) * pow[(i, j)] * scale;
            for col in ctx.labels() {
                let row = ctx.fold(col - xi);
                let v = out.get(row, col) + coeff * ctx.root(2 * eta * (col - xi));
                out.set(row, col, v);
            }
        }
    }
    Ok(out)
}

/// Checks that `rho` is Hermitian with unit trace, to 1e-10.
pub fn validate_density(rho: &Operator) -> Result<()> {
    let herm = rho.hermiticity_residual();
    if herm > 1e-10 {
        return Err(Error::DensityNotHermitian { residual: herm });
    }
    let tr = rho.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
        return Err(Error::DensityTrace { trace: tr });
    }
    Ok(())
}

fn distribution(ctx: &SpaceContext, rho: &Operator, s: OrderParameter) -> Result<PhaseGrid> {
    validate_density(rho)?;
    let grid = map_operator(ctx, rho, s)?;
    let residue = grid.max_imag();
    if residue > GRID_IMAG_LIMIT {
        return Err(Error::ImaginaryResidue {
            what: "quasiprobability grid",
            residue,
            limit: GRID_IMAG_LIMIT,
        });
    }
    Ok(grid)
}

/// Discrete Wigner function: the s = 0 map of a density operator.
pub fn wigner(ctx: &SpaceContext, rho: &Operator) -> Result<PhaseGrid> {
    distribution(ctx, rho, OrderParameter::WIGNER)
}

/// Discrete Husimi function: the s = -1 map, ⟨μ,ν|ρ|μ,ν⟩, pointwise ≥ 0.
pub fn husimi(ctx: &SpaceContext, rho: &Operator) -> Result<PhaseGrid> {
    distribution(ctx, rho, OrderParameter::HUSIMI)
}

/// Discrete Glauber-Sudarshan function: the s = +1 map, the expansion weight
/// of ρ over coherent projectors.
pub fn pfunction(ctx: &SpaceContext, rho: &Operator) -> Result<PhaseGrid> {
    distribution(ctx, rho, OrderParameter::GLAUBER_SUDARSHAN)
}

/// Tr[T⁽ˢ⁾(μ,ν)·T⁽ᵗ⁾(μ′,ν′)] through the closed form
/// (1/N)·Σ_{η,ξ} exp{2πi[η(μ′-μ)+ξ(ν′-ν)]/N}·[K(η,ξ)]^{-(t+s)},
/// finite for every (s,t) since K never vanishes.
pub fn trace_product(
    ctx: &SpaceContext,
    s: OrderParameter,
    t: OrderParameter,
    p1: LabelPair,
    p2: LabelPair,
) -> Complex64 {
    let pow = ctx.overlap_table().pow_neg(s.value() + t.value());
    let (dmu, dnu) = (p2.eta - p1.eta, p2.xi - p1.xi);
    let mut acc = Complex64::default();
    for eta in ctx.labels() {
        for xi in ctx.labels() {
            acc += ctx.root(2 * (eta * dmu + xi * dnu)) * pow[(ctx.idx(eta), ctx.idx(xi))];
        }
    }
    acc / ctx.dim() as f64
}

/// The hierarchy smoothing weight Tr[T⁽⁰⁾(σ,λ)·T⁽⁻¹⁾(μ,ν)]: the discrete
/// Fourier transform of K, equal to the Wigner function of the coherent
/// state |μ,ν⟩ evaluated at (σ,λ).
pub fn smoothing_weight(ctx: &SpaceContext, p1: LabelPair, p2: LabelPair) -> Result<f64> {
    let (dmu, dnu) = (p1.eta - p2.eta, p1.xi - p2.xi);
    let mut acc = Complex64::default();
    for eta in ctx.labels() {
        for xi in ctx.labels() {
            acc += ctx.root(2 * (eta * dmu + xi * dnu))
                * Complex64::new(ctx.k(eta, xi), 0.0);
        }
    }
    acc /= ctx.dim() as f64;
    if acc.im.abs() > GRID_IMAG_LIMIT {
        return Err(Error::ImaginaryResidue {
            what: "smoothing weight",
            residue: acc.im.abs(),
            limit: GRID_IMAG_LIMIT,
        });
    }
    Ok(acc.re)
}

/// The anti-hierarchy folding function
/// Λ(Δμ,Δν) = (1/N)·Σ_{η,ξ} exp{2πi(ηΔμ+ξΔν)/N}·[K(η,ξ)]^{-1}.
///
/// Finite on the torus for every argument; its continuum analogue diverges,
/// which is why the inverse smoothing direction exists only here.
pub fn folding_lambda(ctx: &SpaceContext, dmu: i64, dnu: i64) -> Complex64 {
    let mut acc = Complex64::default();
    for eta in ctx.labels() {
        for xi in ctx.labels() {
            acc += ctx.root(2 * (eta * dmu + xi * dnu)) / ctx.k(eta, xi);
        }
    }
    acc / ctx.dim() as f64
}

/// Tr(A·B) recovered from dual phase-space functions:
/// (1/N)·Σ_{μ,ν} A⁽ˢ⁾(μ,ν)·B⁽⁻ˢ⁾(μ,ν).
pub fn trace_pair_rule(
    ctx: &SpaceContext,
    a: &Operator,
    b: &Operator,
    s: OrderParameter,
) -> Result<Complex64> {
    let ga = map_operator(ctx, a, s)?;
    let gb = map_operator(ctx, b, s.neg())?;
    let acc: Complex64 = ga
        .values()
        .iter()
        .zip(gb.values().iter())
        .map(|(x, y)| x * y)
        .sum();
    Ok(acc / ctx.dim() as f64)
}
