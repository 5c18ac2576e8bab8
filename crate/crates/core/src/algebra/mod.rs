//! Exact arithmetic for the class p(z,w)/(1-zw)^k with Gaussian rational coefficients.

mod gaussian;
mod laurent;
mod omega;
mod parse;
mod ring;

pub use gaussian::GaussianRational;
pub use laurent::LaurentPoly;
pub use omega::{OmegaFunction, Pullback, Slot};
pub use parse::parse_expression;
pub use ring::{Ring, Scalar};
