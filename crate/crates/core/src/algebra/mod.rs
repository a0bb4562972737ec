//! Exact rational-function arithmetic modulo quadratic constraint rules.

pub mod context;
pub mod expr;
pub mod gcd;
pub mod linsolve;
pub mod parse;
pub mod poly;

pub use context::{Context, ContextBuilder, Rule, VarKind};
pub use expr::{RatExpr, Surd};
pub use linsolve::{linear_solve, Solution};
pub use poly::{int, rat, Monomial, MultiPoly, Scalar};
