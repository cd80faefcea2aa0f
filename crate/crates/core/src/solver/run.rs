use crate::diagnostics::{DiagnosticsSeries, SampleBuilder, SeriesRow};
use crate::model::{FluidState, OuterPressure, ThermoParams};
use crate::{Error, Result};

use super::history::StateHistory;
use super::init::initial_boundary_mismatch;
use super::step::{ExternalForcing, Stepper};
use super::SolverConfig;

/// Everything a completed run produces.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub final_state: FluidState,
    pub history: StateHistory,
    pub series: DiagnosticsSeries,
}

/// Advance the initial state to `t_end`, storing snapshots and diagnostics
/// samples every `store_history_every` steps (plus the final instant).
///
/// Step failures (floor breach, volume collapse) abort the run and surface
/// with the failing time attached.
pub fn run(
    initial: &FluidState,
    schedule: &dyn OuterPressure,
    params: &ThermoParams,
    config: &SolverConfig,
    forcing: Option<&dyn ExternalForcing>,
) -> Result<RunOutput> {
    config.validate()?;
    params.validate()?;
    if initial.time() != 0.0 {
        return Err(Error::InvalidArgument(format!(
            "runs start at t = 0, got initial time {}",
            initial.time()
        )));
    }

    let (p0, dp0) = schedule.eval(0.0)?;
    let mut history = StateHistory::new(initial.clone(), p0);
    let mut builder = SampleBuilder::new(initial, schedule, params)?;
    let mismatch = initial_boundary_mismatch(initial, schedule, params)?;

    let mut rows: Vec<SeriesRow> = Vec::new();
    let v_mean_0 = mean(initial.v());
    let p_bar = schedule.limit_pressure();
    let stationary_scale = p_bar * (1.0 + params.heat_capacity / params.gas_constant);
    let e0 = builder.initial_energy();

    let mut work_integral = 0.0f64;
    let mut prev_rate_vbar = dp0 * v_mean_0;
    let mut max_v_mean = v_mean_0;
    let mut global_min_v = initial.min_v();
    let mut global_min_theta = initial.min_theta();
    let initial_momentum = super::init::trapezoid_momentum(initial.u(), initial.dx());

    let push_row = |rows: &mut Vec<SeriesRow>,
                    builder: &mut SampleBuilder,
                    state: &FluidState,
                    work: f64|
     -> Result<()> {
        let sample = builder.sample(state, schedule, params)?;
        // Best stationary estimate with the work accumulated so far.
        let v_hat = (e0 + work) / stationary_scale;
        let theta_hat = p_bar * v_hat / params.gas_constant;
        let (h1_v, h1_u, h1_theta) = if v_hat > 0.0 && theta_hat > 0.0 {
            crate::diagnostics::h1_distance(state, v_hat, theta_hat)
        } else {
            (f64::NAN, f64::NAN, f64::NAN)
        };
        rows.push(SeriesRow {
            sample,
            h1_v,
            h1_u,
            h1_theta,
        });
        Ok(())
    };

    push_row(&mut rows, &mut builder, initial, 0.0)?;

    let mut stepper = Stepper::new(initial.n_cells());
    let mut cur = initial.clone();
    let mut next = initial.clone();

    let fixed_dt = config.cfl_factor.is_none();
    let mut step_index: u64 = 0;
    let time_eps = 1e-12 * config.t_end.max(1.0);

    while cur.time() < config.t_end - time_eps {
        let dt_cap = config.t_end - cur.time();
        let (dt, t_next) = if fixed_dt {
            // keep times on the exact arithmetic progression k * dt
            let t_nominal = (step_index + 1) as f64 * config.dt;
            if t_nominal > config.t_end - time_eps {
                (config.t_end - cur.time(), config.t_end)
            } else {
                (t_nominal - cur.time(), t_nominal)
            }
        } else {
            let dt = stepper.effective_dt(&cur, params, config).min(dt_cap);
            (dt, cur.time() + dt)
        };

        stepper.step_into(
            &cur, &mut next, dt, t_next, schedule, params, config, forcing,
        )?;
        std::mem::swap(&mut cur, &mut next);
        step_index += 1;

        let (p_now, dp_now) = schedule.eval(cur.time())?;
        let v_mean_now = mean(cur.v());
        work_integral += 0.5 * dt * (prev_rate_vbar + dp_now * v_mean_now);
        prev_rate_vbar = dp_now * v_mean_now;
        max_v_mean = max_v_mean.max(v_mean_now);
        global_min_v = global_min_v.min(cur.min_v());
        global_min_theta = global_min_theta.min(cur.min_theta());

        let at_end = cur.time() >= config.t_end - time_eps;
        if step_index % config.store_history_every as u64 == 0 || at_end {
            history.push(&cur, p_now)?;
            push_row(&mut rows, &mut builder, &cur, work_integral)?;
        }
    }

    Ok(RunOutput {
        final_state: cur,
        history,
        series: DiagnosticsSeries {
            rows,
            initial_energy: e0,
            work_integral,
            max_v_mean,
            global_min_v,
            global_min_theta,
            initial_momentum,
            initial_boundary_mismatch: mismatch,
        },
    })
}

fn mean(f: &[f64]) -> f64 {
    f.iter().sum::<f64>() / f.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MassGrid, PressureSchedule};
    use crate::solver::init::{init_state, InitialData};

    fn equilibrium(n: usize) -> FluidState {
        let grid = MassGrid::new(n).unwrap();
        init_state(
            &grid,
            &InitialData::Constant {
                v: 1.0,
                u: 0.0,
                theta: 1.0,
            },
        )
        .unwrap()
        .0
    }

    #[test]
    fn zero_horizon_returns_initial_state() {
        let state = equilibrium(8);
        let schedule = PressureSchedule::constant(1.0).unwrap();
        let config = SolverConfig {
            t_end: 0.0,
            ..SolverConfig::default()
        };
        let out = run(&state, &schedule, &ThermoParams::default(), &config, None).unwrap();
        assert_eq!(out.final_state, state);
        assert_eq!(out.history.snapshots().len(), 1);
        assert_eq!(out.series.rows.len(), 1);
        assert_eq!(out.series.rows[0].sample.t, 0.0);
    }

    #[test]
    fn equilibrium_run_is_a_fixed_point() {
        let state = equilibrium(16);
        let schedule = PressureSchedule::constant(1.0).unwrap();
        let config = SolverConfig {
            dt: 1e-2,
            t_end: 10.0,
            store_history_every: 100,
            ..SolverConfig::default()
        };
        let out = run(&state, &schedule, &ThermoParams::default(), &config, None).unwrap();
        assert!(out.final_state.max_norm_distance(&state) < 1e-10);
        assert!((out.final_state.time() - 10.0).abs() < 1e-9);
        // sample times strictly increasing, first at zero
        let times = out.series.times();
        assert_eq!(times[0], 0.0);
        assert!(times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn smoke_run_produces_increasing_samples_and_snapshots() {
        let grid = MassGrid::new(32).unwrap();
        let (state, _) = init_state(
            &grid,
            &InitialData::SinePerturbed {
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
            dt: 5e-4,
            t_end: 1.0,
            store_history_every: 40,
            ..SolverConfig::default()
        };
        let out = run(
            &state,
            &schedule,
            &ThermoParams::with_beta(1.0),
            &config,
            None,
        )
        .unwrap();
        assert!(out.series.rows.len() > 10);
        assert!((out.history.last_time() - 1.0).abs() < 1e-12);
        assert!(out.series.global_min_v > 0.5);
        assert!(out.series.global_min_theta > 0.5);
        // the final sample lands exactly on t_end
        assert_eq!(out.series.rows.last().unwrap().sample.t, 1.0);
    }

    #[test]
    fn adaptive_stepping_reaches_the_horizon() {
        let state = equilibrium(16);
        let schedule = PressureSchedule::exponential(1.5, 1.0, 2.0).unwrap();
        let config = SolverConfig {
            dt: 1e-2,
            t_end: 0.5,
            cfl_factor: Some(0.5),
            store_history_every: 10,
            ..SolverConfig::default()
        };
        let out = run(&state, &schedule, &ThermoParams::default(), &config, None).unwrap();
        assert!((out.final_state.time() - 0.5).abs() < 1e-9);
    }
}
