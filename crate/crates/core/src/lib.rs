//! Quantum speed limits and non-Markovianity of a classically driven qubit
//! coupled to a zero-temperature Lorentzian reservoir.
//!
//! All frequencies are in units of the coupling strength `R` and all times in
//! units of `1/R`.

pub mod distinguishability;
pub mod error;
pub mod linalg;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod params;
pub mod speed_limit;
pub mod state;
pub mod transition;

pub use error::{Error, Result};
pub use params::PhysicalParams;
pub use state::DressedDensityMatrix;
