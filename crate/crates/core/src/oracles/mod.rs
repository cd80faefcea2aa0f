//! Closed-form and independently computed references the solver is checked
//! against: the integral representation of the specific volume, the
//! stationary end state, the spatially uniform flow reduction, and a fixed
//! manufactured-solution family for convergence-order measurement.

mod mms;
mod representation;
mod stationary;
mod uniform;

pub use mms::MmsCase;
pub use representation::{reconstruct_profile, representation_v};
pub use stationary::{equilibrium_state, stationary_state, StationaryState};
pub use uniform::UniformFlow;
