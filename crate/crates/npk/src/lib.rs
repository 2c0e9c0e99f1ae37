//! Exact computation with n-potent matrices (`e^n = e`) over cyclotomic
//! fields: spectral decomposition into idempotent partitions, equivalence
//! witnesses with machine verification, and the resulting K-group
//! invariants.

pub mod checks;
pub mod cli;
pub mod cyclofield;
pub mod error;
pub mod exactmat;
pub mod kgroup;
pub mod nhom;
pub mod npotent;
pub mod witness;

pub use cyclofield::{CycNum, Rational};
pub use error::{Error, Result};
pub use exactmat::CycMatrix;
