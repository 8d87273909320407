//! Exact computations with Kronecker structures on moduli of projective curves.
//!
//! Everything is computed over the Gaussian rationals `Q(i)`, so every verdict
//! is decided by exact arithmetic.

pub mod blowup;
pub mod bundles;
pub mod curves;
pub mod error;
pub mod form;
pub mod io;
pub mod kronecker;
pub mod matrix;
pub mod minors;
pub mod quadric;
pub mod quaternion;
pub mod scalar;
pub mod selftest;
pub mod sym;

pub use error::{Error, Result};
pub use form::BinaryForm;
pub use matrix::ExactMatrix;
pub use quaternion::{quat_mul, Quaternion, QuaternionValue};
pub use scalar::{gq, ConjRing, GaussianRational, Gq};
