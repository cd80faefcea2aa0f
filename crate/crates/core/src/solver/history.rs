use crate::model::FluidState;
use crate::{Error, Result};

/// One stored instant of a run: the fields the volume-representation formula
/// consumes, together with the boundary pressure that was active.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
    pub boundary_pressure: f64,
}

/// Trajectory data collected along a run: the initial state plus snapshots
/// at the configured stride, strictly increasing in time starting at t = 0.
#[derive(Debug, Clone)]
pub struct StateHistory {
    initial: FluidState,
    snapshots: Vec<Snapshot>,
}

impl StateHistory {
    pub fn new(initial: FluidState, p0: f64) -> Self {
        let first = Snapshot {
            t: initial.time(),
            u: initial.u().to_vec(),
            theta: initial.theta().to_vec(),
            boundary_pressure: p0,
        };
        StateHistory {
            initial,
            snapshots: vec![first],
        }
    }

    pub fn push(&mut self, state: &FluidState, boundary_pressure: f64) -> Result<()> {
        let last_t = self.snapshots.last().map(|s| s.t).unwrap_or(-1.0);
        if state.time() <= last_t {
            return Err(Error::UnsortedSeries {
                index: self.snapshots.len(),
                t: state.time(),
            });
        }
        self.snapshots.push(Snapshot {
            t: state.time(),
            u: state.u().to_vec(),
            theta: state.theta().to_vec(),
            boundary_pressure,
        });
        Ok(())
    }

    pub fn initial(&self) -> &FluidState {
        &self.initial
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn last_time(&self) -> f64 {
        self.snapshots.last().map(|s| s.t).unwrap_or(0.0)
    }

    /// Largest gap between consecutive snapshot times.
    pub fn max_gap(&self) -> f64 {
        self.snapshots
            .windows(2)
            .map(|w| w[1].t - w[0].t)
            .fold(0.0, f64::max)
    }

    /// Index of the snapshot at `t`, accepting a half-gap tolerance; the
    /// representation formula integrates over snapshots up to that index.
    pub fn index_at(&self, t: f64) -> Result<usize> {
        let tol = 0.5 * self.max_gap().max(1e-12);
        if t < -tol || t > self.last_time() + tol {
            return Err(Error::HistoryCoverage {
                t,
                reason: format!("history spans [0, {}]", self.last_time()),
            });
        }
        let best = self
            .snapshots
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (a.t - t).abs().partial_cmp(&(b.t - t).abs()).unwrap()
            })
            .map(|(i, _)| i)
            .unwrap();
        if (self.snapshots[best].t - t).abs() > tol {
            return Err(Error::HistoryCoverage {
                t,
                reason: format!(
                    "nearest snapshot is at t = {} with stride tolerance {tol}",
                    self.snapshots[best].t
                ),
            });
        }
        Ok(best)
    }
}
