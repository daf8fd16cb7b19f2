//! Dense operators and kets on an N-dimensional space with symmetric
//! mod-N index labels γ ∈ [-ℓ, ℓ], ℓ = (N-1)/2, in the u-basis.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Canonical representative of `x` mod `n` in the closed interval [-ℓ, ℓ].
pub fn fold(x: i64, n: usize) -> i64 {
    let n = n as i64;
    let ell = (n - 1) / 2;
    let r = x.rem_euclid(n);
    if r > ell {
        r - n
    } else {
        r
    }
}

/// A pair of phase-space labels stored as canonical residues in [-ℓ, ℓ].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LabelPair {
    pub eta: i64,
    pub xi: i64,
}

impl LabelPair {
    pub fn new(eta: i64, xi: i64, dim: usize) -> Self {
        Self {
            eta: fold(eta, dim),
            xi: fold(xi, dim),
        }
    }
}

/// An N×N complex matrix in the u-basis, rows and columns labeled by
/// γ ∈ [-ℓ, ℓ].
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    dim: usize,
    data: Array2<Complex64>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: Array2::zeros((dim, dim)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            data: Array2::eye(dim),
        }
    }

    pub fn from_matrix(data: Array2<Complex64>) -> Result<Self> {
        let (r, c) = data.dim();
        if r != c {
            return Err(Error::DimensionMismatch { expected: r, got: c });
        }
        Ok(Self { dim: r, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn matrix_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.data
    }

    pub fn into_matrix(self) -> Array2<Complex64> {
        self.data
    }

    fn idx(&self, g: i64) -> usize {
        let ell = (self.dim as i64 - 1) / 2;
        debug_assert!(g.abs() <= ell, "label {g} outside [-{ell}, {ell}]");
        (g + ell) as usize
    }

    /// Entry at symmetric labels (valid for odd `dim` only).
    pub fn get(&self, row: i64, col: i64) -> Complex64 {
        self.data[(self.idx(row), self.idx(col))]
    }

    pub fn set(&mut self, row: i64, col: i64, value: Complex64) {
        let (r, c) = (self.idx(row), self.idx(col));
        self.data[(r, c)] = value;
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.t().mapv(|v| v.conj()),
        }
    }

    pub fn dot(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.dot(&other.data),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.data.diag().sum()
    }

    /// Tr(self† · other): the Hilbert-Schmidt inner product.
    pub fn hs_inner(&self, other: &Self) -> Complex64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.mapv(|v| v * factor),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            data: &self.data + &other.data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            data: &self.data - &other.data,
        }
    }

    pub fn apply(&self, ket: &Ket) -> Ket {
        Ket {
            dim: self.dim,
            data: self.data.dot(&ket.data),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |A - A†| over entries; zero for Hermitian operators.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in 0..self.dim {
                let d = (self.data[(r, c)] - self.data[(c, r)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}

/// A length-N complex vector in the u-basis, components labeled by γ ∈ [-ℓ, ℓ].
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    dim: usize,
    data: Array1<Complex64>,
}

impl Ket {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: Array1::zeros(dim),
        }
    }

    pub fn from_vector(data: Array1<Complex64>) -> Self {
        Self {
            dim: data.len(),
            data,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self) -> &Array1<Complex64> {
        &self.data
    }

    fn idx(&self, g: i64) -> usize {
        let ell = (self.dim as i64 - 1) / 2;
        debug_assert!(g.abs() <= ell, "label {g} outside [-{ell}, {ell}]");
        (g + ell) as usize
    }

    pub fn get(&self, g: i64) -> Complex64 {
        self.data[self.idx(g)]
    }

    pub fn set(&mut self, g: i64, value: Complex64) {
        let i = self.idx(g);
        self.data[i] = value;
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩ with the physics convention (conjugate-linear in self).
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |self⟩⟨self|
    pub fn projector(&self) -> Operator {
        let n = self.dim;
        let mut data = Array2::zeros((n, n));
        for r in 0..n {
            for c in 0..n {
                data[(r, c)] = self.data[r] * self.data[c].conj();
            }
        }
        Operator { dim: n, data }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.mapv(|v| v * factor),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            data: &self.data - &other.data,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_canonical_window() {
        assert_eq!(fold(0, 5), 0);
        assert_eq!(fold(2, 5), 2);
        assert_eq!(fold(3, 5), -2);
        assert_eq!(fold(-3, 5), 2);
        assert_eq!(fold(5, 5), 0);
        assert_eq!(fold(-7, 5), -2);
        assert_eq!(fold(12, 7), -2);
        assert_eq!(fold(0, 1), 0);
    }

    #[test]
    fn label_pair_folds() {
        let p = LabelPair::new(6, -5, 5);
        assert_eq!((p.eta, p.xi), (1, 0));
    }

    #[test]
    fn symmetric_indexing() {
        let mut op = Operator::zeros(5);
        op.set(-2, 2, Complex64::new(1.0, 0.0));
        assert_eq!(op.matrix()[(0, 4)], Complex64::new(1.0, 0.0));
        assert_eq!(op.get(-2, 2), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn projector_and_inner() {
        let mut k = Ket::zeros(3);
        k.set(0, Complex64::new(0.6, 0.0));
        k.set(1, Complex64::new(0.0, 0.8));
        assert!((k.norm() - 1.0).abs() < 1e-15);
        let p = k.projector();
        assert!((p.trace().re - 1.0).abs() < 1e-15);
        assert!(p.hermiticity_residual() < 1e-15);
        assert!((k.inner(&p.apply(&k)) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }
}
