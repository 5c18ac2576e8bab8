pub mod algebra;
pub mod combinat;
pub mod error;
pub mod geometry;
pub mod jets;
pub mod operators;
pub mod restrict;
pub mod random;
pub mod star;
pub mod suites;

pub use algebra::{parse_expression, GaussianRational, LaurentPoly, OmegaFunction, Pullback, Ring, Scalar, Slot};
pub use error::{PmError, PoleFactor, Result};
pub use geometry::{DomainTag, ExtPoint2, MoebiusMap, ProjectiveCoord};
pub use operators::{pm_derive, pm_tilde, PMethod};
