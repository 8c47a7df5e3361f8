//! Exact engine for difference-algebraic systems: difference fields,
//! sigma-polynomial systems, twisted Jacobian families and their exact rank
//! profiles through a generic solution point, difference-index reports with
//! regularity and ideal-membership bounds, and a desk-scale Groebner
//! elimination oracle for cross-validation.

pub mod dfield;
pub mod error;
pub mod index;
pub mod jacobi;
pub mod linalg;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod rank;
pub mod rng;
pub mod sigma;
pub mod sysfile;

pub use error::{Error, Result};
