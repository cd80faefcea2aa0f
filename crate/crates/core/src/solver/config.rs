use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Time-stepping controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Base time step (upper bound when adaptive stepping is on).
    pub dt: f64,
    /// Final time; zero is allowed and returns the initial state.
    pub t_end: f64,
    /// Guard below which the temperature update is treated as a failure
    /// rather than clamped.
    pub theta_floor: f64,
    /// Optional accuracy-driven step multiplier: when set, each step uses
    /// `min(dt, cfl_factor * dx / max(|u| + sqrt(R theta)))`. Stability does
    /// not require it; both implicit stages are unconditionally stable.
    pub cfl_factor: Option<f64>,
    /// Marks runs driven by manufactured-solution forcing.
    pub mms_enabled: bool,
    /// Steps between stored snapshots and diagnostics samples.
    pub store_history_every: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dt: 1e-3,
            t_end: 1.0,
            theta_floor: 1e-10,
            cfl_factor: None,
            mms_enabled: false,
            store_history_every: 5,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "t_end must be >= 0, got {}",
                self.t_end
            )));
        }
        if !(self.theta_floor > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "theta_floor must be positive, got {}",
                self.theta_floor
            )));
        }
        if let Some(c) = self.cfl_factor {
            if !(c > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "cfl_factor must be positive, got {c}"
                )));
            }
        }
        if self.store_history_every == 0 {
            return Err(Error::InvalidArgument(
                "store_history_every must be >= 1".into(),
            ));
        }
        Ok(())
    }

    /// Snapshot stride that yields at least `per_unit` snapshots per unit of
    /// simulated time at the configured `dt`.
    pub fn stride_for_snapshot_density(dt: f64, per_unit: f64) -> usize {
        ((1.0 / (per_unit * dt)).floor() as usize).max(1)
    }
}
