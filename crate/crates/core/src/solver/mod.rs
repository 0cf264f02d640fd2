//! Exact and certified solving: root isolation, number fields, zero-dimensional systems.

pub mod field;
pub mod point;
pub mod roots;
pub mod system;
pub mod torsion;

pub use field::NumberField;
pub use point::{AlgebraicPoint, PointField};
pub use roots::{isolate_roots, RootIsolation};
pub use system::{point_degree, primitive_element, solve_orbits, solve_system};
pub use torsion::{is_root_of_unity, monomial_value, torsion_point_test, AlgebraicValue, TorsionCertificate, TorsionWitness};
