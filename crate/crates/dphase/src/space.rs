//! The immutable per-dimension context: unitary pair U and V, their
//! eigenbases, the discrete Fourier operator, the ϑ₃-built vacuum, and the
//! cached vacuum-overlap table K.
//!
//! Conventions fixed here, once, for everything downstream:
//! - the u-basis is the computational basis and U = diag(exp(2πiγ/N));
//! - ⟨u_μ|v_γ⟩ = N^{-1/2} exp(2πiμγ/N), so both bases are orthonormal;
//! - V = Σ_γ exp(2πiγ/N)|v_γ⟩⟨v_γ|, which acts as V|u_μ⟩ = |u_{μ-1}⟩ and
//!   gives the Weyl relation U^α V^β = exp(-2πiαβ/N) V^β U^α;
//! - the Fourier operator is F = Σ_γ |v_γ⟩⟨u_γ|.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use std::sync::OnceLock;

use crate::coherent::OverlapTable;
use crate::error::{Error, Result};
use crate::operator::{fold, Ket, Operator};
use crate::theta;

/// Largest dimension accepted by [`make_space`].
pub const DEFAULT_MAX_DIM: usize = 2001;

/// Immutable bundle for one odd dimension N. Cheap fields are built eagerly;
/// the dense N×N operators materialize lazily on first use and are shared
/// across threads afterwards.
pub struct SpaceContext {
    dim: usize,
    ell: i64,
    lattice: f64, // a = 1/(2N)
    // roots[k] = exp(i pi k / N), k in [0, 2N); every phase in the formalism
    // is one of these, looked up by integer exponent for exact consistency.
    roots: Vec<Complex64>,
    vacuum: Ket,
    vacuum_norm_sq_direct: f64,
    vacuum_norm_sq_closed: f64,
    overlap: OverlapTable,
    u_op: OnceLock<Operator>,
    v_op: OnceLock<Operator>,
    fourier_op: OnceLock<Operator>,
}

/// Builds the context for an odd dimension N ≤ [`DEFAULT_MAX_DIM`].
pub fn make_space(dim: usize) -> Result<SpaceContext> {
    SpaceContext::with_max_dim(dim, DEFAULT_MAX_DIM)
}

impl SpaceContext {
    pub fn new(dim: usize) -> Result<Self> {
        make_space(dim)
    }

    pub fn with_max_dim(dim: usize, max: usize) -> Result<Self> {
        if dim == 0 || dim % 2 == 0 || dim > max {
            return Err(Error::InvalidDimension { dim, max });
        }
        let n = dim as i64;
        let ell = (n - 1) / 2;
        let a = 1.0 / (2.0 * dim as f64);

        let roots: Vec<Complex64> = (0..2 * n)
            .map(|k| {
                let (s, c) = (std::f64::consts::PI * k as f64 / dim as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();

        // Vacuum amplitudes theta3(2a gamma | 2ia), real and even in gamma.
        let tau = Complex64::new(0.0, 2.0 * a);
        let mut amps = Array1::zeros(dim);
        let mut norm_sq = 0.0;
        for g in -ell..=ell {
            let z = Complex64::new(2.0 * a * g as f64, 0.0);
            let v = theta::theta3(z, tau, theta::DEFAULT_TOL)?;
            if v.im.abs() > 1e-11 * v.norm() {
                return Err(Error::ImaginaryResidue {
                    what: "vacuum amplitude",
                    residue: v.im.abs(),
                    limit: 1e-11,
                });
            }
            amps[(g + ell) as usize] = Complex64::new(v.re, 0.0);
            norm_sq += v.re * v.re;
        }
        let vacuum = Ket::from_vector(amps.mapv(|v| v / norm_sq.sqrt()));

        let norm_sq_closed = OverlapTable::vacuum_norm_sq_closed(a)?;
        let overlap = OverlapTable::build(dim, a, norm_sq_closed)?;

        Ok(Self {
            dim,
            ell,
            lattice: a,
            roots,
            vacuum,
            vacuum_norm_sq_direct: norm_sq,
            vacuum_norm_sq_closed: norm_sq_closed,
            overlap,
            u_op: OnceLock::new(),
            v_op: OnceLock::new(),
            fourier_op: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    /// The lattice constant a = 1/(2N).
    pub fn lattice_constant(&self) -> f64 {
        self.lattice
    }

    pub fn fold(&self, x: i64) -> i64 {
        fold(x, self.dim)
    }

    /// All canonical labels -ℓ..=ℓ.
    pub fn labels(&self) -> impl Iterator<Item = i64> + Clone {
        -self.ell..=self.ell
    }

    /// exp(iπk/N) by integer exponent k (any sign).
    pub(crate) fn root(&self, k: i64) -> Complex64 {
        self.roots[k.rem_euclid(2 * self.dim as i64) as usize]
    }

    pub(crate) fn idx(&self, g: i64) -> usize {
        (g + self.ell) as usize
    }

    /// U = diag(exp(2πiγ/N)).
    pub fn u_operator(&self) -> &Operator {
        self.u_op.get_or_init(|| {
            let mut m = Operator::zeros(self.dim);
            for g in self.labels() {
                m.set(g, g, self.root(2 * g));
            }
            m
        })
    }

    /// V = Σ_γ exp(2πiγ/N)|v_γ⟩⟨v_γ|; in the u-basis this is the cyclic
    /// down-shift V|u_μ⟩ = |u_{μ-1}⟩, which we build directly.
    pub fn v_operator(&self) -> &Operator {
        self.v_op.get_or_init(|| {
            let mut m = Operator::zeros(self.dim);
            for g in self.labels() {
                m.set(self.fold(g - 1), g, Complex64::new(1.0, 0.0));
            }
            m
        })
    }

    /// F = Σ_γ |v_γ⟩⟨u_γ|, entries ⟨u_μ|F|u_γ⟩ = N^{-1/2} exp(2πiμγ/N).
    pub fn fourier_operator(&self) -> &Operator {
        self.fourier_op.get_or_init(|| {
            let scale = 1.0 / (self.dim as f64).sqrt();
            let mut data = Array2::zeros((self.dim, self.dim));
            for m in self.labels() {
                for g in self.labels() {
                    data[(self.idx(m), self.idx(g))] = self.root(2 * m * g) * scale;
                }
            }
            Operator::from_matrix(data).expect("square by construction")
        })
    }

    /// The u-basis ket |u_γ⟩.
    pub fn u_ket(&self, g: i64) -> Ket {
        let mut k = Ket::zeros(self.dim);
        k.set(self.fold(g), Complex64::new(1.0, 0.0));
        k
    }

    /// The v-basis ket |v_γ⟩ with components N^{-1/2} exp(2πiμγ/N).
    pub fn v_ket(&self, g: i64) -> Ket {
        let g = self.fold(g);
        let scale = 1.0 / (self.dim as f64).sqrt();
        let mut k = Ket::zeros(self.dim);
        for m in self.labels() {
            k.set(m, self.root(2 * m * g) * scale);
        }
        k
    }

    /// Applies the Fourier operator without materializing it: an O(N²) DFT.
    pub fn apply_fourier(&self, ket: &Ket) -> Ket {
        let scale = 1.0 / (self.dim as f64).sqrt();
        let mut out = Ket::zeros(self.dim);
        for m in self.labels() {
            let mut acc = Complex64::default();
            for g in self.labels() {
                acc += self.root(2 * m * g) * ket.get(g);
            }
            out.set(m, acc * scale);
        }
        out
    }

    /// The Fourier-invariant reference state |0,0⟩, unit-normalized.
    pub fn vacuum(&self) -> &Ket {
        &self.vacuum
    }

    /// Direct summation Σ_γ ϑ₃(2aγ|2ia)² of the squared vacuum amplitudes.
    pub fn vacuum_norm_sq_direct(&self) -> f64 {
        self.vacuum_norm_sq_direct
    }

    /// Closed-form normalization
    /// 𝒩² = [ϑ₃(0|ia)ϑ₃(0|4ia) + ϑ₄(0|ia)ϑ₂(0|4ia)] / (2√a).
    pub fn vacuum_norm_sq_closed(&self) -> f64 {
        self.vacuum_norm_sq_closed
    }

    /// The cached vacuum-overlap table K(η,ξ) = ⟨0,0|η,ξ⟩.
    pub fn overlap_table(&self) -> &OverlapTable {
        &self.overlap
    }

    /// K(η,ξ) with labels folded mod N.
    pub fn k(&self, eta: i64, xi: i64) -> f64 {
        self.overlap.value(eta, xi)
    }
}

impl std::fmt::Debug for SpaceContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpaceContext")
            .field("dim", &self.dim)
            .field("ell", &self.ell)
            .finish()
    }
}
