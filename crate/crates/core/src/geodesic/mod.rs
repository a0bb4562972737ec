//! Parametrized time-like geodesics: Jacobi fields, the conserved one- and
//! two-forms, Green functions and the bracket of point functionals.

pub mod functional;
pub mod green;
pub mod path;
pub mod suite;

pub use functional::{observable_context, peierls_bracket, reparam_invariant, At, Atom, DeltaFunctional, Gauge};
pub use green::{JacobiImage, PiecewiseKernel};
pub use path::{bilinear, dot, geodesic_context, lower, Geodesic, JacobiField, Matrix4, Placement, Vector4, PARAM};
