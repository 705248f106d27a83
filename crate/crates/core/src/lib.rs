//! Numerics for the Einstein gyrogroup `(ℬⁿ, ⊕)`.
//!
//! - [`gyro`]: velocity addition, gyrations, the Lorentz factor and the
//!   one-parameter subgroups along diameters.
//! - [`geometry`]: Klein-model distance, commutativity and collinearity tests.
//! - [`morphisms`]: the homomorphism residual and a classifier deciding
//!   whether a self-map of the ball is orthogonal, zero, or neither.
//! - [`matrix_models`]: the qubit density matrix and determinant-one pictures
//!   of `(ℬ³, ⊕)`.
//! - [`verifier`]: a seeded property harness over all of the above.

pub mod error;
pub mod geometry;
pub mod gyro;
pub mod matrix_models;
pub mod morphisms;
pub mod verifier;

pub use error::{Error, Result};
pub use gyro::{einstein_add, gamma, gyration, line_param, neg, GyroVector, ToleranceConfig};
pub use matrix_models::{DensityMatrix2, Hermitian2, PosDef2Det1};
pub use morphisms::{BallMap, LinearMap, MapClassification, Witness, ZeroMap};
pub use verifier::{run_suite, BallSampler, PropertyReport};
