//! Linear differential operators, their symbols and plane-wave conjugation.

pub mod operator;
pub mod suite;
pub mod symbols;

pub use operator::{DifferentialOperator, MultiIndex};
pub use symbols::{
    hj_residual, iterated_commutator, iterated_symbol, plane_wave_conjugation, symbol_normalization, PlaneWave,
};
