//! Contact forms, Reeb fields and Jacobi brackets.

pub mod model;
pub mod pair;
pub mod table;

pub use model::{verify_contact, verify_contact_cancellable, CoefficientMode, ContactModel, Witness};
pub use pair::{classify, JacobiPair};
pub use table::{BracketEntry, BracketTable};
