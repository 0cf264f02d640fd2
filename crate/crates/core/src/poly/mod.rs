//! Exact polynomial arithmetic over the rationals.

pub mod factor;
pub mod parse;
pub mod resultant;
pub mod sparse;
pub mod uni;

pub use factor::{irreducible_factors, is_irreducible};
pub use parse::{parse_poly, parse_univariate};
pub use sparse::{PlaneVar, SparsePoly};
pub use uni::{UniPoly, Var};
