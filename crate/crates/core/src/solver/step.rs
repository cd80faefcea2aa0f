use crate::model::{power, FluidState, OuterPressure, ThermoParams};
use crate::{Error, Result};

use super::config::SolverConfig;
use super::tridiag::Tridiag;

/// Node/cell source terms injected into the momentum and internal-energy
/// equations; used by manufactured-solution verification runs.
pub trait ExternalForcing {
    /// Momentum source at position `x`, time `t`.
    fn momentum(&self, x: f64, t: f64) -> f64;
    /// Internal-energy source at position `x`, time `t`.
    fn energy(&self, x: f64, t: f64) -> f64;
}

/// Reusable buffers for stepping one grid size.
#[derive(Debug)]
pub struct Stepper {
    n: usize,
    dx: f64,
    tridiag: Tridiag,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
    delta: Vec<f64>,
    /// mu(theta^n) per cell.
    mu_cell: Vec<f64>,
    /// mu / (dx v^n) per cell: the implicit momentum-flux coefficient.
    visc_coeff: Vec<f64>,
    /// Explicit momentum flux of u^n per cell.
    visc_flux: Vec<f64>,
    /// R theta^n / v^n per cell.
    pressure_cell: Vec<f64>,
    /// kappa(face theta^n) / (dx face v^{n+1}) per node (zero at both ends).
    cond_coeff: Vec<f64>,
    /// Explicit conductive flux of theta^n per node.
    cond_flux: Vec<f64>,
    /// (u^{n+1}_{j+1} - u^{n+1}_j) / dx per cell.
    ux_new: Vec<f64>,
}

impl Stepper {
    pub fn new(n_cells: usize) -> Self {
        let n = n_cells;
        let m = n + 1;
        Stepper {
            n,
            dx: 1.0 / n as f64,
            tridiag: Tridiag::new(),
            lower: vec![0.0; m],
            diag: vec![0.0; m],
            upper: vec![0.0; m],
            rhs: vec![0.0; m],
            delta: vec![0.0; m],
            mu_cell: vec![0.0; n],
            visc_coeff: vec![0.0; n],
            visc_flux: vec![0.0; n],
            pressure_cell: vec![0.0; n],
            cond_coeff: vec![0.0; m],
            cond_flux: vec![0.0; m],
            ux_new: vec![0.0; n],
        }
    }

    /// Step size honoring the optional accuracy multiplier.
    pub fn effective_dt(
        &self,
        state: &FluidState,
        params: &ThermoParams,
        config: &SolverConfig,
    ) -> f64 {
        match config.cfl_factor {
            None => config.dt,
            Some(c) => {
                let mut signal = 0.0f64;
                for j in 0..self.n {
                    let u_mid = 0.5 * (state.u()[j] + state.u()[j + 1]).abs();
                    let sound = (params.gas_constant * state.theta()[j]).sqrt();
                    signal = signal.max(u_mid + sound);
                }
                if signal > 0.0 {
                    config.dt.min(c * self.dx / signal)
                } else {
                    config.dt
                }
            }
        }
    }

    /// Advance `state` to `t_next = state.t + dt`, writing into `next`.
    ///
    /// Stages: (1) implicit velocity update in delta form with coefficients
    /// frozen at theta^n, v^n, explicit pressure gradient and the boundary
    /// stress -p(t_next) on the end-node half cells; (2) exact volume update
    /// from the new velocity; (3) implicit temperature update in delta form
    /// with face conductivities frozen at theta^n over v^{n+1}, insulated end
    /// faces, and the explicit compression + dissipation source evaluated
    /// with u^{n+1}, v^{n+1}, theta^n.
    pub fn step_into(
        &mut self,
        state: &FluidState,
        next: &mut FluidState,
        dt: f64,
        t_next: f64,
        schedule: &dyn OuterPressure,
        params: &ThermoParams,
        config: &SolverConfig,
        forcing: Option<&dyn ExternalForcing>,
    ) -> Result<()> {
        let n = self.n;
        let m = n + 1;
        debug_assert_eq!(state.n_cells(), n);
        let dx = self.dx;
        let (p_next, _) = schedule.eval(t_next)?;

        let v0: &[f64] = state.v();
        let u0: &[f64] = state.u();
        let th0: &[f64] = state.theta();

        // Stage 1: velocity.
        for j in 0..n {
            let mu = params.mu_tilde * power(th0[j], params.alpha);
            self.mu_cell[j] = mu;
            self.visc_coeff[j] = mu / (dx * v0[j]);
            self.visc_flux[j] = self.visc_coeff[j] * (u0[j + 1] - u0[j]);
            self.pressure_cell[j] = params.gas_constant * th0[j] / v0[j];
        }
        let g = &self.visc_coeff;
        self.diag[0] = dx / (2.0 * dt) + g[0];
        self.upper[0] = -g[0];
        self.lower[0] = 0.0;
        self.rhs[0] = self.visc_flux[0] - self.pressure_cell[0] + p_next;
        for i in 1..n {
            self.diag[i] = dx / dt + g[i] + g[i - 1];
            self.lower[i] = -g[i - 1];
            self.upper[i] = -g[i];
            self.rhs[i] = self.visc_flux[i] - self.visc_flux[i - 1]
                - (self.pressure_cell[i] - self.pressure_cell[i - 1]);
        }
        self.diag[n] = dx / (2.0 * dt) + g[n - 1];
        self.lower[n] = -g[n - 1];
        self.upper[n] = 0.0;
        self.rhs[n] = -p_next - self.visc_flux[n - 1] + self.pressure_cell[n - 1];
        if let Some(f) = forcing {
            self.rhs[0] += 0.5 * dx * f.momentum(0.0, t_next);
            for i in 1..n {
                self.rhs[i] += dx * f.momentum(i as f64 * dx, t_next);
            }
            self.rhs[n] += 0.5 * dx * f.momentum(1.0, t_next);
        }
        {
            let (lo, di, up, rh) = (&self.lower, &self.diag, &self.upper, &self.rhs);
            self.tridiag.solve(lo, di, up, rh, &mut self.delta);
        }

        next.set_time(t_next);
        let (v1, u1, th1) = next.fields_mut();
        for i in 0..m {
            u1[i] = u0[i] + self.delta[i];
            if !u1[i].is_finite() {
                return Err(Error::NonFinite {
                    field: "u",
                    t: t_next,
                });
            }
        }

        // Stage 2: volume, exact in the new velocity.
        let mut min_v = f64::INFINITY;
        for j in 0..n {
            self.ux_new[j] = (u1[j + 1] - u1[j]) / dx;
            v1[j] = v0[j] + dt * self.ux_new[j];
            if !v1[j].is_finite() {
                return Err(Error::NonFinite {
                    field: "v",
                    t: t_next,
                });
            }
            min_v = min_v.min(v1[j]);
        }
        if !(min_v > 0.0) {
            return Err(Error::VolumeCollapse { t: t_next, min_v });
        }

        // Stage 3: temperature.
        self.cond_coeff[0] = 0.0;
        self.cond_coeff[n] = 0.0;
        self.cond_flux[0] = 0.0;
        self.cond_flux[n] = 0.0;
        for i in 1..n {
            let theta_face = 0.5 * (th0[i - 1] + th0[i]);
            let v_face = 0.5 * (v1[i - 1] + v1[i]);
            let kappa = params.kappa_tilde * power(theta_face, params.beta);
            self.cond_coeff[i] = kappa / (dx * v_face);
            self.cond_flux[i] = self.cond_coeff[i] * (th0[i] - th0[i - 1]);
        }
        let cv_w = params.heat_capacity * dx / dt;
        for j in 0..n {
            let h_l = self.cond_coeff[j];
            let h_r = self.cond_coeff[j + 1];
            self.diag[j] = cv_w + h_l + h_r;
            self.lower[j] = -h_l;
            self.upper[j] = -h_r;
            let ux = self.ux_new[j];
            let source = (-params.gas_constant * th0[j] * ux + self.mu_cell[j] * ux * ux) / v1[j];
            self.rhs[j] = self.cond_flux[j + 1] - self.cond_flux[j] + dx * source;
        }
        if let Some(f) = forcing {
            for j in 0..n {
                let x = (2 * j + 1) as f64 / (2 * n) as f64;
                self.rhs[j] += dx * f.energy(x, t_next);
            }
        }
        {
            let (lo, di, up, rh) = (
                &self.lower[..n],
                &self.diag[..n],
                &self.upper[..n],
                &self.rhs[..n],
            );
            self.tridiag.solve(lo, di, up, rh, &mut self.delta[..n]);
        }
        let mut min_theta = f64::INFINITY;
        for j in 0..n {
            th1[j] = th0[j] + self.delta[j];
            if !th1[j].is_finite() {
                return Err(Error::NonFinite {
                    field: "theta",
                    t: t_next,
                });
            }
            min_theta = min_theta.min(th1[j]);
        }
        if !(min_theta > config.theta_floor) {
            return Err(Error::TemperatureFloor {
                t: t_next,
                min_theta,
                floor: config.theta_floor,
            });
        }
        Ok(())
    }
}

/// Advance one step, allocating a fresh state. The run loop uses
/// [`Stepper::step_into`] with reused buffers instead.
pub fn step(
    state: &FluidState,
    schedule: &dyn OuterPressure,
    params: &ThermoParams,
    config: &SolverConfig,
    forcing: Option<&dyn ExternalForcing>,
) -> Result<FluidState> {
    config.validate()?;
    params.validate()?;
    let mut stepper = Stepper::new(state.n_cells());
    let dt = stepper.effective_dt(state, params, config);
    let mut next = state.clone();
    stepper.step_into(
        state,
        &mut next,
        dt,
        state.time() + dt,
        schedule,
        params,
        config,
        forcing,
    )?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MassGrid, PressureSchedule};
    use crate::solver::init::{init_state, trapezoid_momentum, InitialData};
    use crate::solver::SolverConfig;

    fn default_config(dt: f64) -> SolverConfig {
        SolverConfig {
            dt,
            t_end: 1.0,
            ..SolverConfig::default()
        }
    }

    /// Equilibrium is a bit-exact fixed point: the delta solves see an
    /// exactly zero right-hand side.
    #[test]
    fn equilibrium_fixed_point_is_exact() {
        let grid = MassGrid::new(16).unwrap();
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
        let params = ThermoParams::default();
        let next = step(&state, &schedule, &params, &default_config(1e-2), None).unwrap();
        assert_eq!(next.max_norm_distance(&state), 0.0);
        assert_eq!(next.time(), 1e-2);
    }

    /// One explicit hand-assembled 4x4 system for N = 3 checks the velocity
    /// stage row by row.
    #[test]
    fn velocity_stage_matches_hand_assembled_system() {
        let n = 3;
        let dx = 1.0 / 3.0;
        let dt = 1e-3;
        let v = vec![1.0, 1.2, 0.9];
        let theta = vec![1.0, 1.1, 0.95];
        let u = vec![0.1, -0.05, 0.2, 0.0];
        let state = FluidState::new(v.clone(), u.clone(), theta.clone(), 0.0).unwrap();
        let params = ThermoParams::default();
        let schedule = PressureSchedule::exponential(2.0, 1.0, 1.0).unwrap();
        let config = default_config(dt);

        let next = step(&state, &schedule, &params, &config, None).unwrap();

        // assemble A d = b by hand (mu = 1 everywhere since alpha = 0)
        let g: Vec<f64> = (0..n).map(|j| 1.0 / (dx * v[j])).collect();
        let p: Vec<f64> = (0..n).map(|j| theta[j] / v[j]).collect();
        let gu: Vec<f64> = (0..n).map(|j| g[j] * (u[j + 1] - u[j])).collect();
        let p_next = schedule.eval(dt).unwrap().0;
        let mut a = [[0.0f64; 4]; 4];
        let mut b = [0.0f64; 4];
        a[0][0] = dx / (2.0 * dt) + g[0];
        a[0][1] = -g[0];
        b[0] = gu[0] - p[0] + p_next;
        for i in 1..3 {
            a[i][i - 1] = -g[i - 1];
            a[i][i] = dx / dt + g[i] + g[i - 1];
            a[i][i + 1] = -g[i];
            b[i] = gu[i] - gu[i - 1] - (p[i] - p[i - 1]);
        }
        a[3][2] = -g[2];
        a[3][3] = dx / (2.0 * dt) + g[2];
        b[3] = -p_next - gu[2] + p[2];

        // dense Gaussian elimination, written out as the independent oracle
        let mut aug = [[0.0f64; 5]; 4];
        for i in 0..4 {
            aug[i][..4].copy_from_slice(&a[i]);
            aug[i][4] = b[i];
        }
        for col in 0..4 {
            let piv = (col..4)
                .max_by(|&r1, &r2| aug[r1][col].abs().partial_cmp(&aug[r2][col].abs()).unwrap())
                .unwrap();
            aug.swap(col, piv);
            for r in col + 1..4 {
                let f = aug[r][col] / aug[col][col];
                for c in col..5 {
                    aug[r][c] -= f * aug[col][c];
                }
            }
        }
        let mut d = [0.0f64; 4];
        for i in (0..4).rev() {
            let mut s = aug[i][4];
            for c in i + 1..4 {
                s -= aug[i][c] * d[c];
            }
            d[i] = s / aug[i][i];
        }

        for i in 0..4 {
            let expect = u[i] + d[i];
            assert!(
                (next.u()[i] - expect).abs() < 1e-13,
                "node {i}: {} vs {}",
                next.u()[i],
                expect
            );
        }
    }

    #[test]
    fn volume_identity_is_exact() {
        let grid = MassGrid::new(24).unwrap();
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
        let params = ThermoParams::default();
        let config = default_config(1e-3);
        let mut s = state;
        for _ in 0..50 {
            let next = step(&s, &schedule, &params, &config, None).unwrap();
            let dx = s.dx();
            let dv: f64 = next
                .v()
                .iter()
                .zip(s.v())
                .map(|(a, b)| (a - b) * dx)
                .sum();
            let flux = (next.time() - s.time()) * (next.u()[next.n_cells()] - next.u()[0]);
            assert!(
                (dv - flux).abs() < 1e-15,
                "volume identity violated: {dv} vs {flux}"
            );
            s = next;
        }
    }

    #[test]
    fn momentum_is_conserved_per_step() {
        // several schedules, a perturbed start, 100 steps each
        let schedules: Vec<PressureSchedule> = vec![
            PressureSchedule::constant(1.0).unwrap(),
            PressureSchedule::exponential(2.0, 1.0, 1.0).unwrap(),
            PressureSchedule::smoothstep(1.0, 2.0, 0.0, 0.05).unwrap(),
        ];
        for schedule in &schedules {
            let grid = MassGrid::new(32).unwrap();
            let (state, m0) = init_state(
                &grid,
                &InitialData::SinePerturbed {
                    v_base: 1.0,
                    v_amplitude: 0.1,
                    wavenumber: 2,
                    phase: 0.4,
                    u: 0.3,
                    theta: 1.0,
                },
            )
            .unwrap();
            let params = ThermoParams::default();
            let config = default_config(5e-4);
            let mut s = state;
            for _ in 0..100 {
                s = step(&s, schedule, &params, &config, None).unwrap();
                let m = trapezoid_momentum(s.u(), s.dx());
                let scale: f64 = s.u().iter().map(|x| x.abs()).sum::<f64>().max(1.0);
                assert!(
                    (m - m0).abs() <= 1e-12 * scale,
                    "momentum drift {:e} at t = {}",
                    (m - m0).abs(),
                    s.time()
                );
            }
        }
    }

    #[test]
    fn floor_breach_is_reported_not_clamped() {
        // mild expansion cools the gas (compression work beats dissipation
        // while theta > u_x); a floor just under theta_0 must trip.
        let n = 8;
        let v = vec![1.0; n];
        let theta = vec![1.2; n];
        let u: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64 - 0.5).collect();
        let state = FluidState::new(v, u, theta, 0.0).unwrap();
        let params = ThermoParams::default();
        let schedule = PressureSchedule::constant(0.2).unwrap();
        let mut config = default_config(0.01);
        config.theta_floor = 1.15;
        let mut s = state;
        let mut breached = false;
        for _ in 0..200 {
            match step(&s, &schedule, &params, &config, None) {
                Ok(next) => s = next,
                Err(Error::TemperatureFloor { t, min_theta, .. }) => {
                    assert!(t > 0.0);
                    assert!(min_theta < 1.15);
                    breached = true;
                    break;
                }
                Err(e) => panic!("unexpected error: {e}"),
            }
        }
        assert!(breached, "expected a temperature-floor breach");
    }
}
