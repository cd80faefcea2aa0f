use std::f64::consts::PI;

use crate::model::{power, FluidState, MassGrid, OuterPressure, ThermoParams};
use crate::solver::ExternalForcing;
use crate::{Error, Result};

/// Fixed manufactured-solution family for convergence-order measurement:
///
/// - `v*(x,t) = a0 + a1 cos(2 pi x) e^{-t}`
/// - `u*(x,t) = b1 sin(2 pi x) e^{-t}` with `b1 = -a1 / (2 pi)`, so the
///   volume equation holds exactly with zero mass forcing
/// - `theta*(x,t) = d0 + d1 cos(pi x)^2 e^{-t}`, insulated at both ends
///
/// The targets share their boundary stress at the two ends, so a single
/// induced pressure `p*(t)` makes them an exact solution of the
/// boundary-value problem once the hand-derived momentum and energy forcings
/// are injected. Constant viscosity (`alpha = 0`) is required; `beta` is
/// free.
#[derive(Debug, Clone, Copy)]
pub struct MmsCase {
    pub a0: f64,
    pub a1: f64,
    pub d0: f64,
    pub d1: f64,
    b1: f64,
    params: ThermoParams,
}

impl MmsCase {
    pub fn new(a0: f64, a1: f64, d0: f64, d1: f64, params: ThermoParams) -> Result<Self> {
        params.validate()?;
        if params.alpha != 0.0 {
            return Err(Error::InvalidArgument(
                "manufactured forcings are derived for constant viscosity (alpha = 0)".into(),
            ));
        }
        if !(a0 - a1.abs() > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "target volume can reach zero: a0 = {a0}, |a1| = {}",
                a1.abs()
            )));
        }
        if !(d0 + d1.min(0.0) > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "target temperature can reach zero: d0 = {d0}, d1 = {d1}"
            )));
        }
        let b1 = -a1 / (2.0 * PI);
        let q = params.gas_constant * d1 - 2.0 * PI * params.mu_tilde * b1;
        if !(params.gas_constant * d0 + q > 0.0) {
            return Err(Error::InvalidArgument(
                "induced boundary pressure would not stay positive".into(),
            ));
        }
        Ok(MmsCase {
            a0,
            a1,
            d0,
            d1,
            b1,
            params,
        })
    }

    /// Small-amplitude default case used by the convergence ladder.
    pub fn standard(params: ThermoParams) -> Result<Self> {
        MmsCase::new(1.0, 0.1, 1.0, 0.1, params)
    }

    pub fn params(&self) -> &ThermoParams {
        &self.params
    }

    /// Target fields `(v*, u*, theta*)` at a point.
    pub fn targets(&self, x: f64, t: f64) -> (f64, f64, f64) {
        let e = (-t).exp();
        let c2 = (2.0 * PI * x).cos();
        let s2 = (2.0 * PI * x).sin();
        let cp = (PI * x).cos();
        (
            self.a0 + self.a1 * c2 * e,
            self.b1 * s2 * e,
            self.d0 + self.d1 * cp * cp * e,
        )
    }

    /// The volume equation holds exactly by construction.
    pub fn forcing_mass(&self, _x: f64, _t: f64) -> f64 {
        0.0
    }

    /// Hand-derived momentum residual
    /// `u*_t + P*_x - mu (u*_x / v*)_x` of the targets.
    pub fn forcing_momentum(&self, x: f64, t: f64) -> f64 {
        let p = &self.params;
        let e = (-t).exp();
        let c2 = (2.0 * PI * x).cos();
        let s2 = (2.0 * PI * x).sin();
        let cp = (PI * x).cos();

        let v = self.a0 + self.a1 * c2 * e;
        let v_x = -2.0 * PI * self.a1 * s2 * e;
        let th = self.d0 + self.d1 * cp * cp * e;
        let th_x = -PI * self.d1 * s2 * e;
        let u_t = -self.b1 * s2 * e;
        let u_x = 2.0 * PI * self.b1 * c2 * e;
        let u_xx = -4.0 * PI * PI * self.b1 * s2 * e;

        let pressure_x = p.gas_constant * (th_x * v - th * v_x) / (v * v);
        let viscous = p.mu_tilde * (u_xx * v - u_x * v_x) / (v * v);
        u_t + pressure_x - viscous
    }

    /// Hand-derived internal-energy residual
    /// `c_v theta*_t + (R theta*/v*) u*_x - (kappa theta*_x / v*)_x - mu u*_x^2 / v*`.
    pub fn forcing_energy(&self, x: f64, t: f64) -> f64 {
        let p = &self.params;
        let e = (-t).exp();
        let c2 = (2.0 * PI * x).cos();
        let s2 = (2.0 * PI * x).sin();
        let cp = (PI * x).cos();

        let v = self.a0 + self.a1 * c2 * e;
        let v_x = -2.0 * PI * self.a1 * s2 * e;
        let th = self.d0 + self.d1 * cp * cp * e;
        let th_x = -PI * self.d1 * s2 * e;
        let th_xx = -2.0 * PI * PI * self.d1 * c2 * e;
        let th_t = -0.5 * self.d1 * (1.0 + c2) * e;
        let u_x = 2.0 * PI * self.b1 * c2 * e;

        let th_pow = power(th, p.beta);
        // (kappa theta^beta theta_x / v)_x expanded by hand
        let conduction = p.kappa_tilde
            * ((p.beta * power(th, p.beta - 1.0) * th_x * th_x + th_pow * th_xx) / v
                - th_pow * th_x * v_x / (v * v));
        p.heat_capacity * th_t + p.gas_constant * th * u_x / v
            - conduction
            - p.mu_tilde * u_x * u_x / v
    }

    /// Target fields sampled on the staggered grid at t = 0.
    pub fn initial_state(&self, grid: &MassGrid) -> Result<FluidState> {
        let v = grid.cell_centers().map(|x| self.targets(x, 0.0).0).collect();
        let theta = grid.cell_centers().map(|x| self.targets(x, 0.0).2).collect();
        let u = grid.nodes().map(|x| self.targets(x, 0.0).1).collect();
        FluidState::new(v, u, theta, 0.0)
    }

    /// L2 errors of a solver state against the targets at the state's time:
    /// `(||v - v*||, ||u - u*||, ||theta - theta*||)`.
    pub fn l2_error(&self, state: &FluidState) -> (f64, f64, f64) {
        let n = state.n_cells();
        let dx = state.dx();
        let t = state.time();
        let mut ev = 0.0;
        let mut eth = 0.0;
        for j in 0..n {
            let x = (2 * j + 1) as f64 / (2 * n) as f64;
            let (v_ref, _, th_ref) = self.targets(x, t);
            ev += (state.v()[j] - v_ref).powi(2);
            eth += (state.theta()[j] - th_ref).powi(2);
        }
        let mut eu = 0.0;
        for i in 0..=n {
            let x = i as f64 / n as f64;
            let (_, u_ref, _) = self.targets(x, t);
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            eu += w * (state.u()[i] - u_ref).powi(2);
        }
        ((ev * dx).sqrt(), (eu * dx).sqrt(), (eth * dx).sqrt())
    }

    fn pressure_numerator_slope(&self) -> f64 {
        self.params.gas_constant * self.d1 - 2.0 * PI * self.params.mu_tilde * self.b1
    }
}

impl OuterPressure for MmsCase {
    /// Boundary pressure induced by the targets:
    /// `p*(t) = (R d0 + q e^{-t}) / (a0 + a1 e^{-t})` with
    /// `q = R d1 - 2 pi mu b1`; identical at both ends by symmetry.
    fn eval(&self, t: f64) -> Result<(f64, f64)> {
        let e = (-t).exp();
        let q = self.pressure_numerator_slope();
        let num = self.params.gas_constant * self.d0 + q * e;
        let den = self.a0 + self.a1 * e;
        let p = num / den;
        let dp = -e * (q * self.a0 - self.params.gas_constant * self.d0 * self.a1) / (den * den);
        Ok((p, dp))
    }

    fn integral(&self, t: f64) -> Result<f64> {
        let e = (-t).exp();
        let r_d0 = self.params.gas_constant * self.d0;
        let q = self.pressure_numerator_slope();
        if self.a1 == 0.0 {
            return Ok((r_d0 * t + q * (1.0 - e)) / self.a0);
        }
        // partial fractions of (R d0 + q E) / (E (a0 + a1 E)) in E = e^{-t}
        let a = r_d0 / self.a0;
        let b = q - a * self.a1;
        Ok(a * t + (b / self.a1) * ((self.a0 + self.a1) / (self.a0 + self.a1 * e)).ln())
    }

    fn limit_pressure(&self) -> f64 {
        self.params.gas_constant * self.d0 / self.a0
    }

    fn tail_variation(&self, t: f64) -> Result<f64> {
        // p* is monotone in e^{-t}: the remaining variation is |p - p_inf|
        let (p, _) = self.eval(t)?;
        Ok((p - self.limit_pressure()).abs())
    }
}

impl ExternalForcing for MmsCase {
    fn momentum(&self, x: f64, t: f64) -> f64 {
        self.forcing_momentum(x, t)
    }

    fn energy(&self, x: f64, t: f64) -> f64 {
        self.forcing_energy(x, t)
    }
}
