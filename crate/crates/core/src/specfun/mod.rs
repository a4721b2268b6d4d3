//! Real special functions and quadrature used by the BLER expressions.

mod bessel;
mod lambert;
mod meijer;
mod normal;
mod quad;

pub use bessel::{bessel_k1, one_minus_x_k1};
pub use lambert::lambert_w0;
pub use meijer::{bessel_moment, phi_meijer, phi_meijer_diff};
pub use normal::q_function;
pub use quad::{integrate, QuadratureSpec};

pub(crate) use bessel::{k0_unchecked, k1_unchecked};
pub(crate) use normal::q_unchecked;
