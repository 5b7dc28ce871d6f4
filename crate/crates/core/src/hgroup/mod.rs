//! Heisenberg group ℍᵈ: group law, Koranyi gauge, left-invariant horizontal
//! fields and the operators built from them.
//!
//! Coordinates are flat slices `(x_1..x_d, y_1..y_d, t)` of length `2d+1`.
//! Left-invariant fields: `X_j = ∂x_j + 2y_j ∂t`, `Y_j = ∂y_j − 2x_j ∂t`,
//! `T = ∂t`, so `[X_j, Y_j] = −4T`.

mod jet;
mod ops;
mod point;
mod stencil;

pub use jet::{ClosedForm, FnField, Jet};
pub use ops::{
    apply_field, div_horizontal, horizontal_gradient, horizontal_hessian, koranyi_gradient_norm_oracle,
    koranyi_gradient_oracle, koranyi_sublaplacian_oracle, radial_derivative, sigma_h_norm, sublaplacian, FieldOp,
    KoranyiNorm, RadialHorizontalField, VectorField,
};
pub(crate) use ops::div_horizontal_from;

pub(crate) use point::koranyi_norm_coords;
pub use point::{group_multiply, koranyi_norm, HPoint, HVector, SigmaMatrix};
pub use stencil::{GridField, Stencil};

/// Default exclusion radius around the axis `z = 0`, relative to the domain scale.
pub const EPS_AXIS: f64 = 1e-8;
