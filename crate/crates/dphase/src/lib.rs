//! Quasiprobability phase-space methods for finite-dimensional quantum
//! systems.
//!
//! For an odd dimension N the crate provides the unitary shift/clock pair
//! and its operator basis, Jacobi-theta-built coherent states on the
//! N×N phase-space torus, and the family of s-parametrized mapping kernels
//! T⁽ˢ⁾(μ,ν) that turn operators into phase-space functions and back.
//! The s = 0, -1, +1 members reproduce the discrete Wigner, Husimi and
//! Glauber-Sudarshan distributions, connected by smoothing in one direction
//! and, unlike the continuum, by an exact inverse folding in the other.
//! Large-N diagnostics quantify how the discrete vacuum overlap approaches
//! its Gaussian limit.
//!
//! ```
//! use dphase::{make_space, kernel, sample};
//! use rand::SeedableRng;
//!
//! let ctx = make_space(7).unwrap();
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
//! let rho = sample::random_density(7, &mut rng);
//! let h = kernel::husimi(&ctx, &rho).unwrap();
//! assert!(h.min_real() >= -1e-12); // Husimi values never go negative
//! let back = kernel::reconstruct(&ctx, &h, kernel::OrderParameter::GLAUBER_SUDARSHAN).unwrap();
//! assert!(back.max_abs_diff(&rho) < 1e-9);
//! ```

pub mod coherent;
pub mod continuum;
pub mod error;
pub mod kernel;
pub mod operator;
pub mod sample;
pub mod schwinger;
pub mod space;
pub mod theta;
pub mod verify;

pub use coherent::OverlapTable;
pub use error::{Error, Result};
pub use kernel::{KernelFamily, OrderParameter, PhaseGrid};
pub use operator::{fold, Ket, LabelPair, Operator};
pub use space::{make_space, SpaceContext, DEFAULT_MAX_DIM};
