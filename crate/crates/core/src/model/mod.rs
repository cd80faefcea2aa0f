//! Domain types and constitutive relations for the gas model. No dynamics
//! live here; the solver consumes these types.

mod constitutive;
mod grid;
mod params;
mod schedule;
mod state;

pub use constitutive::{conductivity, pressure, stress, viscosity};
pub(crate) use constitutive::power;
pub use grid::MassGrid;
pub use params::ThermoParams;
pub use schedule::{OuterPressure, PressureSchedule, ScheduleStats};
pub use state::FluidState;
