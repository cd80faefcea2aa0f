use serde::Serialize;

use crate::diagnostics::{total_energy, DiagnosticsSeries};
use crate::model::{FluidState, MassGrid, OuterPressure, ThermoParams};
use crate::{Error, Result};

/// The constant end state predicted from the initial totals and the
/// accumulated work of the varying boundary pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryState {
    pub v_hat: f64,
    pub theta_hat: f64,
    pub p_bar: f64,
    /// Accumulated `int_0^T p' v_mean` over the run.
    pub correction: f64,
    /// Bound on the neglected `int_T^inf` part: remaining pressure variation
    /// times the largest observed mean volume.
    pub tail_bound: f64,
    /// Whether `tail_bound` fell below the requested tolerance.
    pub horizon_sufficient: bool,
}

/// Evaluate the stationary state from the initial data and a completed run.
///
/// The prediction is `v_hat = (E(0) + W) / (p_bar (1 + c_v / R))` with the
/// balance `theta_hat = p_bar v_hat / R`; under normalized constants this is
/// the familiar `1 / (2 p_bar)` prefactor. An insufficient horizon is flagged
/// rather than fatal.
pub fn stationary_state(
    initial: &FluidState,
    schedule: &dyn OuterPressure,
    params: &ThermoParams,
    series: &DiagnosticsSeries,
    final_time: f64,
    tail_tolerance: f64,
) -> Result<StationaryState> {
    let (p0, _) = schedule.eval(initial.time())?;
    let e0 = total_energy(initial, p0, params);
    let p_bar = schedule.limit_pressure();
    if !(p_bar > 0.0) {
        return Err(Error::InvalidSchedule(format!(
            "limit pressure {p_bar} is not positive; no stationary state"
        )));
    }
    let correction = series.work_integral;
    let tail_bound = schedule.tail_variation(final_time)? * series.max_v_mean;
    let v_hat = (e0 + correction) / (p_bar * (1.0 + params.heat_capacity / params.gas_constant));
    let theta_hat = p_bar * v_hat / params.gas_constant;
    Ok(StationaryState {
        v_hat,
        theta_hat,
        p_bar,
        correction,
        tail_bound,
        horizon_sufficient: tail_bound <= tail_tolerance,
    })
}

/// The uniform state `(v_hat, 0, p_bar v_hat / R)` whose stress balances the
/// boundary forcing exactly.
pub fn equilibrium_state(
    p_bar: f64,
    v_hat: f64,
    grid: &MassGrid,
    params: &ThermoParams,
) -> Result<FluidState> {
    if !(p_bar > 0.0) {
        return Err(Error::NonPositive {
            field: "p_bar",
            value: p_bar,
        });
    }
    if !(v_hat > 0.0) {
        return Err(Error::NonPositive {
            field: "v_hat",
            value: v_hat,
        });
    }
    let n = grid.n_cells();
    let theta_hat = p_bar * v_hat / params.gas_constant;
    FluidState::new(vec![v_hat; n], vec![0.0; n + 1], vec![theta_hat; n], 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{stress, PressureSchedule};
    use crate::solver::{run, SolverConfig};

    fn series_stub(work: f64, max_v_mean: f64) -> DiagnosticsSeries {
        DiagnosticsSeries {
            rows: Vec::new(),
            initial_energy: 0.0,
            work_integral: work,
            max_v_mean,
            global_min_v: 1.0,
            global_min_theta: 1.0,
            initial_momentum: 0.0,
            initial_boundary_mismatch: 0.0,
        }
    }

    #[test]
    fn direct_arithmetic_constant_pressure_one() {
        // u0 = 0, theta0 = 1, v0 = 1, p = 1: v_hat = (0 + 1 + 1)/2 = 1
        let grid = MassGrid::new(8).unwrap();
        let params = ThermoParams::default();
        let initial =
            FluidState::new(vec![1.0; 8], vec![0.0; 9], vec![1.0; 8], 0.0).unwrap();
        let schedule = PressureSchedule::constant(1.0).unwrap();
        let s = stationary_state(&initial, &schedule, &params, &series_stub(0.0, 1.0), 10.0, 1e-6)
            .unwrap();
        assert!((s.v_hat - 1.0).abs() < 1e-15);
        assert!((s.theta_hat - 1.0).abs() < 1e-15);
        assert_eq!(s.tail_bound, 0.0);
        assert!(s.horizon_sufficient);
        let _ = grid;
    }

    #[test]
    fn direct_arithmetic_constant_pressure_two() {
        // p = 2: E0 = theta0 + p v0 = 3, v_hat = 3/4, theta_hat = 3/2
        let params = ThermoParams::default();
        let initial =
            FluidState::new(vec![1.0; 8], vec![0.0; 9], vec![1.0; 8], 0.0).unwrap();
        let schedule = PressureSchedule::constant(2.0).unwrap();
        let s = stationary_state(&initial, &schedule, &params, &series_stub(0.0, 1.0), 10.0, 1e-6)
            .unwrap();
        assert!((s.v_hat - 0.75).abs() < 1e-15);
        assert!((s.theta_hat - 1.5).abs() < 1e-15);
    }

    #[test]
    fn balance_identity_holds_for_any_output() {
        let params = ThermoParams {
            gas_constant: 1.7,
            heat_capacity: 0.9,
            ..ThermoParams::default()
        };
        let initial =
            FluidState::new(vec![1.1; 8], vec![0.2; 9], vec![0.8; 8], 0.0).unwrap();
        let schedule = PressureSchedule::exponential(2.0, 1.0, 1.0).unwrap();
        let s = stationary_state(
            &initial,
            &schedule,
            &params,
            &series_stub(-0.13, 1.4),
            40.0,
            1e-6,
        )
        .unwrap();
        assert!((s.theta_hat * params.gas_constant - s.p_bar * s.v_hat).abs() < 1e-12);
    }

    #[test]
    fn run_accumulated_correction_cross_checks_late_time_mean() {
        // short horizon on a coarse grid: prediction and late-time mean agree
        // at the tail-bound + discretization level
        let grid = MassGrid::new(32).unwrap();
        let params = ThermoParams::with_beta(1.0);
        let (initial, _) = crate::solver::init_state(
            &grid,
            &crate::solver::InitialData::SinePerturbed {
                v_base: 1.0,
                v_amplitude: 0.1,
                wavenumber: 1,
                phase: 0.0,
                u: 0.0,
                theta: 1.0,
            },
        )
        .unwrap();
        let schedule = PressureSchedule::exponential(2.0, 1.0, 1.0).unwrap();
        let config = SolverConfig {
            dt: 1e-3,
            t_end: 30.0,
            store_history_every: 100,
            ..Default::default()
        };
        let out = run(&initial, &schedule, &params, &config, None).unwrap();
        let s = stationary_state(&initial, &schedule, &params, &out.series, 30.0, 1e-3).unwrap();
        assert!(s.horizon_sufficient);
        assert!((s.theta_hat - s.p_bar * s.v_hat).abs() < 1e-12);
        let v_mean_late = out.series.rows.last().unwrap().sample.v_mean;
        assert!(
            (v_mean_late - s.v_hat).abs() < s.tail_bound + 5e-3,
            "late mean {v_mean_late} vs prediction {}",
            s.v_hat
        );
    }

    #[test]
    fn equilibrium_state_balances_the_boundary() {
        let grid = MassGrid::new(8).unwrap();
        let params = ThermoParams::default();
        let s = equilibrium_state(1.0, 1.0, &grid, &params).unwrap();
        assert!(s.v().iter().all(|&v| v == 1.0));
        assert!(s.theta().iter().all(|&t| t == 1.0));
        let s = equilibrium_state(2.0, 0.75, &grid, &params).unwrap();
        assert!((s.theta()[0] - 1.5).abs() < 1e-15);
        // boundary stress equals -p_bar exactly (u_x = 0)
        let sigma = stress(0.0, s.v()[0], s.theta()[0], &params).unwrap();
        assert_eq!(sigma, -2.0);
    }
}
