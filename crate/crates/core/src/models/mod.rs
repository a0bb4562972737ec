//! Relativistic particle models on Minkowski space.

pub mod common;
pub mod lagrangian;
pub mod mass_shell;
pub mod poincare;
pub mod two_point;

pub use common::{Corruption, Mass, METRIC};
pub use lagrangian::{build_lagrangian, LagrangianModel};
pub use mass_shell::{build_mass_shell, MassShellModel};
pub use poincare::{poincare_generators, StructureConstants};
pub use two_point::{build_two_point, TwoPointModel};
