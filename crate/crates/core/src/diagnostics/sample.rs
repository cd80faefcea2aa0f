use crate::model::{FluidState, OuterPressure, ThermoParams};
use crate::solver::trapezoid_momentum_of;
use crate::{Error, Result};

use super::envelopes::EnvelopeTracker;
use super::functionals::{cell_mean, dissipation_v, entropy_functional, grad_norms, total_energy};

/// Every tracked functional evaluated at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsSample {
    pub t: f64,
    /// `int (c_v theta + u^2/2 + p(t) v)`.
    pub total_energy: f64,
    /// `int (u^2/2 + v - ln v + theta - ln theta)`; at least 2.
    pub entropy_functional: f64,
    /// Dissipation rate; nonnegative.
    pub dissipation_v: f64,
    pub theta_mean: f64,
    pub v_mean: f64,
    pub min_v: f64,
    pub max_v: f64,
    pub min_theta: f64,
    pub max_theta: f64,
    pub int_vx2: f64,
    pub int_ux2: f64,
    pub int_thetax2: f64,
    /// Trapezoid-weighted `int u`.
    pub momentum: f64,
    /// Exponential pressure weight `Y(t)`; at least 1 for positive pressure.
    pub y: f64,
    /// Forcing envelope `F(t)`.
    pub f: f64,
    /// Running `|E(t) - E(0) - int_0^t p' v_mean|` with trapezoid time
    /// quadrature over the sampled series.
    pub energy_residual: f64,
}

/// A diagnostics sample plus the H^1 distances to the run's current
/// stationary estimate; one CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub sample: DiagnosticsSample,
    pub h1_v: f64,
    pub h1_u: f64,
    pub h1_theta: f64,
}

/// Sampled diagnostics of a completed run with the run-level accumulators
/// the stationary-state evaluation needs.
#[derive(Debug, Clone)]
pub struct DiagnosticsSeries {
    pub rows: Vec<SeriesRow>,
    /// `E(0)` including the boundary-pressure potential.
    pub initial_energy: f64,
    /// `int_0^T p' v_mean` accumulated at step resolution.
    pub work_integral: f64,
    /// Largest mean specific volume seen during the run.
    pub max_v_mean: f64,
    /// Smallest cell values seen at any step (not just at samples).
    pub global_min_v: f64,
    pub global_min_theta: f64,
    /// Trapezoid-weighted initial momentum.
    pub initial_momentum: f64,
    /// Initial mismatch between the field stress and the imposed boundary
    /// stress, `max` over the two ends.
    pub initial_boundary_mismatch: f64,
}

impl DiagnosticsSeries {
    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.sample.t).collect()
    }

    pub fn momentum_drift_max(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.sample.momentum - self.initial_momentum).abs())
            .fold(0.0, f64::max)
    }

    pub fn peak_energy_residual(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.sample.energy_residual)
            .fold(0.0, f64::max)
    }
}

/// Incremental sample construction along a run: keeps the sampled-series
/// energy-balance accumulator and the envelope recurrence.
#[derive(Debug)]
pub struct SampleBuilder {
    e0: f64,
    prev_t: f64,
    prev_rate_vbar: f64,
    sampled_work: f64,
    envelope: EnvelopeTracker,
}

impl SampleBuilder {
    pub fn new(
        initial: &FluidState,
        schedule: &dyn OuterPressure,
        params: &ThermoParams,
    ) -> Result<Self> {
        let (p0, dp0) = schedule.eval(initial.time())?;
        let e0 = total_energy(initial, p0, params);
        Ok(SampleBuilder {
            e0,
            prev_t: initial.time(),
            prev_rate_vbar: dp0 * cell_mean(initial.v()),
            sampled_work: 0.0,
            envelope: EnvelopeTracker::new(schedule)?,
        })
    }

    pub fn initial_energy(&self) -> f64 {
        self.e0
    }

    /// Evaluate all functionals at the state's time (which must not precede
    /// the previous sample).
    pub fn sample(
        &mut self,
        state: &FluidState,
        schedule: &dyn OuterPressure,
        params: &ThermoParams,
    ) -> Result<DiagnosticsSample> {
        let t = state.time();
        let (p, dp) = schedule.eval(t)?;
        let energy = total_energy(state, p, params);
        let v_mean = cell_mean(state.v());
        let rate_vbar = dp * v_mean;
        if t > self.prev_t {
            self.sampled_work += 0.5 * (t - self.prev_t) * (self.prev_rate_vbar + rate_vbar);
        }
        self.prev_t = t;
        self.prev_rate_vbar = rate_vbar;
        let (y, f) = self.envelope.advance(schedule, t)?;
        let (int_vx2, int_ux2, int_thetax2) = grad_norms(state);
        Ok(DiagnosticsSample {
            t,
            total_energy: energy,
            entropy_functional: entropy_functional(state)?,
            dissipation_v: dissipation_v(state, params)?,
            theta_mean: cell_mean(state.theta()),
            v_mean,
            min_v: state.min_v(),
            max_v: state.max_v(),
            min_theta: state.min_theta(),
            max_theta: state.max_theta(),
            int_vx2,
            int_ux2,
            int_thetax2,
            momentum: trapezoid_momentum_of(state),
            y,
            f,
            energy_residual: (energy - self.e0 - self.sampled_work).abs(),
        })
    }
}

/// Recompute the energy-balance residual series
/// `|E(t) - E(0) - int_0^t p' v_mean|` from sampled data, with trapezoid
/// time quadrature on the sampled mean volume.
pub fn energy_balance_residual(
    samples: &[DiagnosticsSample],
    schedule: &dyn OuterPressure,
) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Ok(Vec::new());
    }
    for (i, w) in samples.windows(2).enumerate() {
        if w[1].t <= w[0].t {
            return Err(Error::UnsortedSeries {
                index: i + 1,
                t: w[1].t,
            });
        }
    }
    let e0 = samples[0].total_energy;
    let mut out = Vec::with_capacity(samples.len());
    let mut work = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for s in samples {
        let (_, dp) = schedule.eval(s.t)?;
        let rate = dp * s.v_mean;
        if let Some((t_prev, rate_prev)) = prev {
            work += 0.5 * (s.t - t_prev) * (rate_prev + rate);
        }
        prev = Some((s.t, rate));
        out.push((s.total_energy - e0 - work).abs());
    }
    Ok(out)
}
