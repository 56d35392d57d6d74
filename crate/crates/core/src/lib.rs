//! Kolmogorov width exponents for anisotropic Sobolev and Nikol'skii
//! classes and mixed-norm balls, with numerical checks at desk scale.

pub mod arith;
pub mod ball_widths;
pub mod error;
pub mod exponents;
pub mod mixed_norm;
pub mod trig_approx;
pub mod width_oracle;

pub use error::{Error, Result};
