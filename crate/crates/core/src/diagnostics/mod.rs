//! Functionals and envelopes evaluated along trajectories: energy balance,
//! the convex entropy-like functional, the dissipation rate, the
//! mean-temperature bracket from convexity of `x - ln x`, decay envelopes
//! built from the boundary pressure, and log-linear decay-rate fits.
//!
//! Everything here is a pure function of states, series and schedules.

mod envelopes;
mod fit;
mod functionals;
mod jensen;
mod sample;

pub use envelopes::{f_of_t, y_of_t, EnvelopeTracker};
pub use fit::{fit_decay_rate, DecayFit, WindowPolicy};
pub use functionals::{
    dissipation_v, entropy_functional, grad_norms, h1_distance, total_energy, variance,
};
pub use jensen::{jensen_bounds, jensen_check, JensenBounds, JensenReport};
pub use sample::{
    energy_balance_residual, DiagnosticsSample, DiagnosticsSeries, SampleBuilder, SeriesRow,
};
