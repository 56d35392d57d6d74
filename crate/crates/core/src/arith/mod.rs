//! Exact scalar arithmetic shared by the exponent and ball-width modules.

mod power;
mod real;

pub use power::PowerProduct;
pub use real::Real;
