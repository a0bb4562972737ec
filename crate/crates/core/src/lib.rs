//! Exact symbolic engine for contact and Jacobi structures on relativistic
//! phase spaces.

pub mod algebra;
pub mod contact;
pub mod error;
pub mod exterior;
pub mod geodesic;
pub mod models;
pub mod operators;
pub mod report;

pub use error::{Error, Result};

extern crate self as jacobi_core;

#[cfg(test)]
#[path = "../tests/common/mod.rs"]
mod testkit;

#[cfg(test)]
mod properties;
