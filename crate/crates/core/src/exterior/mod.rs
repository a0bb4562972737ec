//! Differential forms and multivector fields on coordinate charts.

pub mod chart;
pub mod forms;
pub mod graded;
pub mod map;
pub mod multivector;

pub use chart::{CancelToken, Chart};
pub use graded::{DifferentialForm, Graded, MultivectorField};
pub use map::{restrict_multivector, SmoothMap};
