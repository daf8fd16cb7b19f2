//! The unitary operator basis S(η,ξ) = N^{-1/2} U^η V^ξ exp(iπηξ/N) and the
//! decomposition of arbitrary operators over it.
//!
//! Labels always fold to the canonical window [-ℓ,ℓ] before any phase is
//! computed; the fold fixes the otherwise label-dependent sign
//! S(η+N,ξ) = (-1)^ξ S(η,ξ) to one canonical choice, so congruent labels
//! produce identical matrices.
//!
//! Integer powers of U and V never go through matrix products: U^η V^ξ is a
//! shift-and-phase pattern with exactly one nonzero entry per column,
//! (U^η V^ξ)[γ-ξ, γ] = exp(2πiη(γ-ξ)/N), which keeps every element O(N) to
//! build and exact up to one root-of-unity rounding.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::space::SpaceContext;

impl SpaceContext {
    /// The basis element S(η,ξ), labels folded mod N.
    pub fn schwinger_element(&self, eta: i64, xi: i64) -> Operator {
        let (eta, xi) = (self.fold(eta), self.fold(xi));
        let scale = 1.0 / (self.dim() as f64).sqrt();
        let mut op = Operator::zeros(self.dim());
        for col in self.labels() {
            let row = self.fold(col - xi);
            // N^{-1/2} exp(2πiη(col-ξ)/N) exp(iπηξ/N)
            let phase = self.root(2 * eta * (col - xi) + eta * xi);
            op.set(row, col, phase * scale);
        }
        op
    }

    /// Coefficient grid c(η,ξ) = Tr[S†(η,ξ)·O] over η,ξ ∈ [-ℓ,ℓ],
    /// returned with η as the row index (offset by ℓ).
    pub fn schwinger_decompose(&self, op: &Operator) -> Result<Array2<Complex64>> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: op.dim(),
            });
        }
        let scale = 1.0 / (self.dim() as f64).sqrt();
        let mut coeffs = Array2::zeros((self.dim(), self.dim()));
        for eta in self.labels() {
            for xi in self.labels() {
                // S†(η,ξ) = S(-η,-ξ); Tr[S(-η,-ξ)·O] touches one entry of O
                // per column of S.
                let mut acc = Complex64::default();
                for col in self.labels() {
                    let row = self.fold(col + xi);
                    let phase = self.root(-2 * eta * (col + xi) + eta * xi);
                    acc += phase * op.get(col, row);
                }
                coeffs[(self.idx(eta), self.idx(xi))] = acc * scale;
            }
        }
        Ok(coeffs)
    }

    /// Rebuilds Σ c(η,ξ)·S(η,ξ) from a coefficient grid.
    pub fn schwinger_compose(&self, coeffs: &Array2<Complex64>) -> Result<Operator> {
        if coeffs.dim() != (self.dim(), self.dim()) {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: coeffs.dim().0,
            });
        }
        let scale = 1.0 / (self.dim() as f64).sqrt();
        let mut op = Operator::zeros(self.dim());
        for eta in self.labels() {
            for xi in self.labels() {
                let c = coeffs[(self.idx(eta), self.idx(xi))];
                if c == Complex64::default() {
                    continue;
                }
                for col in self.labels() {
                    let row = self.fold(col - xi);
                    let phase = self.root(2 * eta * (col - xi) + eta * xi);
                    let v = op.get(row, col) + c * phase * scale;
                    op.set(row, col, v);
                }
            }
        }
        Ok(op)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::make_space;
    use ndarray::Array2;

    #[test]
    fn origin_element_is_scaled_identity() {
        let ctx = make_space(5).unwrap();
        let s = ctx.schwinger_element(0, 0);
        let want = Operator::identity(5).scaled(Complex64::new(1.0 / 5f64.sqrt(), 0.0));
        assert!(s.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn adjoint_negates_labels() {
        let ctx = make_space(7).unwrap();
        let d = ctx
            .schwinger_element(1, 2)
            .adjoint()
            .max_abs_diff(&ctx.schwinger_element(-1, -2));
        assert!(d < 1e-14);
    }

    #[test]
    fn matches_explicit_matrix_product() {
        let ctx = make_space(5).unwrap();
        let pow = |op: &Operator, k: i64| {
            let mut acc = Operator::identity(5);
            for _ in 0..k.rem_euclid(5) {
                acc = acc.dot(op);
            }
            acc
        };
        for (eta, xi) in [(1i64, 0i64), (0, 1), (2, -1), (-2, 2), (1, 2)] {
            let direct = pow(ctx.u_operator(), eta)
                .dot(&pow(ctx.v_operator(), xi))
                .scaled(ctx.root(eta * xi) / Complex64::new(5f64.sqrt(), 0.0));
            let d = ctx.schwinger_element(eta, xi).max_abs_diff(&direct);
            assert!(d < 1e-14, "({eta},{xi}): {d}");
        }
    }

    #[test]
    fn trace_orthonormality() {
        let ctx = make_space(5).unwrap();
        let mut worst = 0.0f64;
        for m in ctx.labels() {
            for n in ctx.labels() {
                let left = ctx.schwinger_element(m, n);
                for e in ctx.labels() {
                    for x in ctx.labels() {
                        let tr = left.hs_inner(&ctx.schwinger_element(e, x));
                        let want = if e == m && x == n { 1.0 } else { 0.0 };
                        worst = worst.max((tr - Complex64::new(want, 0.0)).norm());
                    }
                }
            }
        }
        assert!(worst < 1e-13, "orthonormality residual {worst}");
    }

    #[test]
    fn congruent_labels_give_identical_elements() {
        let ctx = make_space(5).unwrap();
        for (eta, xi) in [(1i64, 1i64), (2, -2), (-1, 0)] {
            let base = ctx.schwinger_element(eta, xi);
            assert!(base.max_abs_diff(&ctx.schwinger_element(eta + 5, xi)) < 1e-15);
            assert!(base.max_abs_diff(&ctx.schwinger_element(eta, xi + 5)) < 1e-15);
        }
    }

    #[test]
    fn decompose_identity() {
        let ctx = make_space(5).unwrap();
        let coeffs = ctx.schwinger_decompose(&Operator::identity(5)).unwrap();
        for eta in ctx.labels() {
            for xi in ctx.labels() {
                let c = coeffs[(ctx.idx(eta), ctx.idx(xi))];
                let want = if eta == 0 && xi == 0 {
                    Complex64::new(5f64.sqrt(), 0.0)
                } else {
                    Complex64::default()
                };
                assert!((c - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn decompose_picks_out_single_element() {
        let ctx = make_space(5).unwrap();
        let coeffs = ctx
            .schwinger_decompose(&ctx.schwinger_element(2, 1))
            .unwrap();
        for eta in ctx.labels() {
            for xi in ctx.labels() {
                let c = coeffs[(ctx.idx(eta), ctx.idx(xi))];
                let want = if eta == 2 && xi == 1 { 1.0 } else { 0.0 };
                assert!((c - Complex64::new(want, 0.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn decompose_compose_round_trip() {
        let ctx = make_space(7).unwrap();
        // deterministic non-symmetric complex matrix
        let mut data = Array2::zeros((7, 7));
        for r in 0..7 {
            for c in 0..7 {
                let x = (r * 7 + c) as f64;
                data[(r, c)] = Complex64::new((0.3 * x).sin(), (0.7 * x + 1.0).cos());
            }
        }
        let op = Operator::from_matrix(data).unwrap();
        let coeffs = ctx.schwinger_decompose(&op).unwrap();
        let back = ctx.schwinger_compose(&coeffs).unwrap();
        assert!(back.max_abs_diff(&op) < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let ctx = make_space(5).unwrap();
        assert!(matches!(
            ctx.schwinger_decompose(&Operator::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
