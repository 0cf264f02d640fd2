//! Certified tangential intersections of a plane curve in the two-dimensional
//! multiplicative torus with the subtori `x^p y^q = 1` and their translates,
//! together with the explicit height and degree bounds that control them.

pub mod arith;
pub mod bounds;
pub mod error;
pub mod heights;
pub mod poly;
pub mod report;
pub mod solver;
pub mod tangency;

pub use error::{Error, Result};
