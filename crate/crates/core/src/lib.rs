//! Horizontal calculus on the Heisenberg group ℍᵈ, the explicit constants of
//! uniform resolvent estimates for the sublaplacian, and numerical
//! certification of the Hardy and resolvent inequalities on closed-form test
//! fields.
//!
//! The group calculus ([`hgroup`]), the scalar kernels ([`numerics`]) and the
//! constant solvers ([`constants`]) are generic over [`Real`]; quadrature and
//! the verification layers work in `f64`.

pub mod constants;
pub mod error;
pub mod fields;
pub mod hardy;
pub mod hgroup;
pub mod numerics;
pub mod potentials;
pub mod resolvent;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type Point = hgroup::HPoint<f64>;
pub type Jet64 = hgroup::Jet<f64>;
pub type Grid = hgroup::GridField<f64>;
