//! Small numerical kernels: bracketed root finding, derivative-free minimization,
//! Gauss–Legendre nodes and compensated summation.

pub mod gauss;
pub mod minimize;
pub mod roots;
pub mod sum;

pub use gauss::gauss_legendre;
pub use minimize::{coordinate_descent_2d, golden_section, minimize_on_log_scale, Minimum};
pub use roots::{bisect, expand_bracket, newton_bisect};
pub use sum::{pairwise_sum, NeumaierSum};
