use crate::model::OuterPressure;
use crate::solver::StateHistory;
use crate::{Error, Result};

/// Reconstruct the specific volume at every cell center at time `t` from the
/// stored trajectory, independently of the volume update:
///
/// `v = v0 / (B Y) * (1 + (1/v0) int_0^t B theta Y dtau)` with
/// `B(x, t) = exp(int_0^x (u0 - u))` and `Y(t) = exp(int_0^t p)`.
///
/// Everything is evaluated in log space, so the exponential weights cannot
/// overflow on long horizons. Spatial integrals use trapezoid quadrature over
/// nodes with an exact-linear correction to cell centers; the time integral
/// is a trapezoid over the stored snapshots.
pub fn reconstruct_profile(
    t: f64,
    history: &StateHistory,
    schedule: &dyn OuterPressure,
) -> Result<Vec<f64>> {
    let idx = history.index_at(t)?;
    let snaps = &history.snapshots()[..=idx];
    let initial = history.initial();
    let n = initial.n_cells();
    let u0 = initial.u();
    let v0 = initial.v();
    let t_eval = snaps[idx].t;

    let log_y_final = schedule.integral(t_eval)?;
    let mut log_b_final = vec![0.0; n];
    log_b_at_cells(u0, &snaps[idx].u, n, &mut log_b_final);

    // Trapezoid in time of exp(ln B(tau) - ln B(t) + L(tau) - L(t)) theta.
    let mut integral = vec![0.0f64; n];
    let mut prev_weighted: Vec<f64> = vec![0.0; n];
    let mut log_b_tau = vec![0.0; n];
    let mut prev_t = 0.0;
    for (k, snap) in snaps.iter().enumerate() {
        let log_y_tau = schedule.integral(snap.t)?;
        log_b_at_cells(u0, &snap.u, n, &mut log_b_tau);
        for j in 0..n {
            let w = (log_b_tau[j] - log_b_final[j] + log_y_tau - log_y_final).exp()
                * snap.theta[j];
            if k > 0 {
                integral[j] += 0.5 * (snap.t - prev_t) * (prev_weighted[j] + w);
            }
            prev_weighted[j] = w;
        }
        prev_t = snap.t;
    }

    let mut v = vec![0.0; n];
    for j in 0..n {
        v[j] = v0[j] * (-log_b_final[j] - log_y_final).exp() + integral[j];
    }
    Ok(v)
}

/// Reconstructed specific volume at the cell containing `x`.
pub fn representation_v(
    x: f64,
    t: f64,
    history: &StateHistory,
    schedule: &dyn OuterPressure,
) -> Result<f64> {
    let n = history.initial().n_cells();
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!(
            "position {x} outside the unit mass interval"
        )));
    }
    let j = ((x * n as f64) as usize).min(n - 1);
    Ok(reconstruct_profile(t, history, schedule)?[j])
}

/// `ln B` at cell centers: cumulative trapezoid of `u0 - u` over nodes plus
/// the exact-linear half-cell correction.
fn log_b_at_cells(u0: &[f64], u: &[f64], n: usize, out: &mut [f64]) {
    let dx = 1.0 / n as f64;
    let mut cum = 0.0;
    for j in 0..n {
        let w_l = u0[j] - u[j];
        let w_r = u0[j + 1] - u[j + 1];
        out[j] = cum + dx / 8.0 * (3.0 * w_l + w_r);
        cum += 0.5 * dx * (w_l + w_r);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FluidState, MassGrid, PressureSchedule, ThermoParams};
    use crate::solver::{init_state, InitialData};

    #[test]
    fn reproduces_initial_volume_exactly_at_t_zero() {
        let grid = MassGrid::new(32).unwrap();
        let (state, _) = init_state(
            &grid,
            &InitialData::SinePerturbed {
                v_base: 1.0,
                v_amplitude: 0.1,
                wavenumber: 1,
                phase: 0.3,
                u: 0.25,
                theta: 1.0,
            },
        )
        .unwrap();
        let schedule = PressureSchedule::exponential(2.0, 1.0, 1.0).unwrap();
        let history = StateHistory::new(state.clone(), 2.0);
        let v = reconstruct_profile(0.0, &history, &schedule).unwrap();
        for j in 0..32 {
            assert_eq!(v[j], state.v()[j], "cell {j}");
        }
    }

    #[test]
    fn equilibrium_history_collapses_to_constant() {
        // u = 0, theta = theta_hat, p = p_bar: the weight integral telescopes
        // and the reconstruction returns v_hat at every time.
        let n = 16;
        let p_bar = 1.0;
        let v_hat = 1.0;
        let schedule = PressureSchedule::constant(p_bar).unwrap();
        let state = FluidState::new(vec![v_hat; n], vec![0.0; n + 1], vec![p_bar * v_hat; n], 0.0)
            .unwrap();
        let mut history = StateHistory::new(state.clone(), p_bar);
        // snapshots need a dense stride so the trapezoid error stays tiny
        let steps = 2000;
        for k in 1..=steps {
            let t = 2.0 * k as f64 / steps as f64;
            let s = FluidState::new(
                vec![v_hat; n],
                vec![0.0; n + 1],
                vec![p_bar * v_hat; n],
                t,
            )
            .unwrap();
            history.push(&s, p_bar).unwrap();
        }
        let v = reconstruct_profile(2.0, &history, &schedule).unwrap();
        for (j, &vj) in v.iter().enumerate() {
            assert!(
                (vj - v_hat).abs() < 1e-6,
                "cell {j}: {vj} (trapezoid-in-time error should be tiny)"
            );
        }
    }

    #[test]
    fn representation_tracks_the_solver() {
        // short standard scenario: the reconstruction must follow the solver
        // volume within a fraction of a percent
        let n = 128;
        let grid = MassGrid::new(n).unwrap();
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
        let params = ThermoParams::with_beta(1.0);
        let config = crate::solver::SolverConfig {
            dt: 2e-4,
            t_end: 0.5,
            store_history_every: 10,
            ..Default::default()
        };
        let out = crate::solver::run(&state, &schedule, &params, &config, None).unwrap();
        let v_rec = reconstruct_profile(0.5, &out.history, &schedule).unwrap();
        let v_sol = out.final_state.v();
        let mut worst = 0.0f64;
        for j in 0..n {
            worst = worst.max((v_rec[j] - v_sol[j]).abs() / v_sol[j]);
        }
        assert!(worst < 1e-2, "relative gap {worst}");
    }

    #[test]
    fn coverage_error_past_history() {
        let grid = MassGrid::new(8).unwrap();
        let (state, _) = init_state(
            &grid,
            &InitialData::Constant {
                v: 1.0,
                u: 0.0,
                theta: 1.0,
            },
        )
        .unwrap();
        let schedule = PressureSchedule::constant(1.0).unwrap();
        let history = StateHistory::new(state, 1.0);
        assert!(matches!(
            reconstruct_profile(1.0, &history, &schedule),
            Err(Error::HistoryCoverage { .. })
        ));
    }
}
