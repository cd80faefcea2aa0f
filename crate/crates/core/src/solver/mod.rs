//! Conservative staggered-grid discretization of the gas dynamics system
//! with an imposed boundary stress `-p(t)` and insulated ends.
//!
//! Velocity lives on nodes; specific volume and temperature live on cells.
//! Each step runs three stages: a semi-implicit velocity solve with frozen
//! momentum-diffusion coefficients and explicit pressure, the exact volume
//! update from the new velocity, and a semi-implicit temperature solve with
//! frozen face conductivities and an explicit compression/dissipation source.
//! The two implicit stages are solved in delta form, which makes the uniform
//! equilibrium a bit-exact fixed point of the scheme.

mod config;
mod history;
mod init;
mod run;
mod step;
mod tridiag;

pub use config::SolverConfig;
pub use history::{Snapshot, StateHistory};
pub use init::{
    apply_boundary, init_state, initial_boundary_mismatch, trapezoid_momentum_of, BoundaryValues,
    InitialData,
};
pub use run::{run, RunOutput};
pub use step::{step, ExternalForcing, Stepper};
