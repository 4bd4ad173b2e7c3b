//! Two-photon polarization toolkit: density-matrix algebra, Werner-state
//! construction, entanglement witness and partial-transpose tests, and a
//! coincidence-counting simulator for local polarization analyzers.

pub mod error;
pub mod polarimeter;
pub mod qmat;
pub mod random;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
pub use num_complex::Complex64;
