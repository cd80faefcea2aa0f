//! Numerical laboratory for the one-dimensional motion of a viscous,
//! heat-conducting ideal gas in Lagrangian mass coordinates, driven by a
//! prescribed outer pressure acting on both ends of the gas column.
//!
//! The column occupies the unit mass interval; the unknowns are the specific
//! volume `v`, velocity `u` and temperature `theta`. The total stress at both
//! ends is held at `-p(t)` for a configurable pressure schedule and the ends
//! are thermally insulated. Heat conductivity may degenerate with temperature
//! as a power law, which is the regime this laboratory focuses on.
//!
//! The crate is organized in five layers:
//!
//! - [`model`]: domain types (mass grid, state, constitutive parameters,
//!   pressure schedules) and the constitutive relations.
//! - [`solver`]: a conservative staggered-grid, semi-implicit time stepper.
//! - [`diagnostics`]: functionals tracked along a run (energy balance,
//!   entropy functional, dissipation rate, mean-temperature bracket, decay
//!   envelopes, decay-rate fits).
//! - [`oracles`]: closed-form and independently computed references used to
//!   cross-check the solver (volume representation formula, stationary state,
//!   uniform-flow reduction, manufactured solutions).
//! - [`harness`]: run configurations, presets, CSV/JSON artifacts, the
//!   verification suites and everything behind the `outerpress` CLI.

pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod model;
pub mod oracles;
pub mod solver;

pub use error::{Error, Result};
