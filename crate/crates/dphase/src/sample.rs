//! Deterministic random operators for tests, verification suites and the
//! CLI generator. All draws go through the caller's RNG, so a seeded RNG
//! reproduces operators bit for bit.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;

use crate::operator::Operator;

/// One standard-normal deviate via Box-Muller.
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// N×N matrix with independent standard complex Gaussian entries.
pub fn random_complex_matrix<R: Rng>(dim: usize, rng: &mut R) -> Array2<Complex64> {
    Array2::from_shape_fn((dim, dim), |_| {
        Complex64::new(standard_normal(rng), standard_normal(rng))
    })
}

/// Random Hermitian operator (G + G†)/2.
pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> Operator {
    let g = random_complex_matrix(dim, rng);
    let h = (&g + &g.t().mapv(|v| v.conj())) / Complex64::new(2.0, 0.0);
    Operator::from_matrix(h).expect("square by construction")
}

/// Random density operator G·G†/Tr(G·G†): Hermitian, positive semidefinite,
/// unit trace.
pub fn random_density<R: Rng>(dim: usize, rng: &mut R) -> Operator {
    let g = random_complex_matrix(dim, rng);
    let prod = g.dot(&g.t().mapv(|v| v.conj()));
    let tr: Complex64 = prod.diag().sum();
    Operator::from_matrix(prod.mapv(|v| v / tr.re)).expect("square by construction")
}
