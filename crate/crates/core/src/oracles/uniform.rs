use crate::model::{FluidState, MassGrid, OuterPressure, ThermoParams};
use crate::{Error, Result};

/// Spatially uniform flow with a linear velocity profile `u = c (x - 1/2)`.
///
/// With constant viscosity the reduced dynamics close exactly:
/// `v(t) = v0 + c t`, `theta(t) = theta_inf + (theta0 - theta_inf)(v0/v)^g`
/// with `g = R / c_v` and `theta_inf = mu_tilde c / R`, and the induced
/// boundary pressure collapses to the power law `p(t) = A / v^{g+1}` with
/// `A = (R theta0 - mu_tilde c) v0^g`. Injected as initial data with that
/// schedule, the flow solves the boundary-value problem exactly, which makes
/// it an end-to-end solver oracle.
#[derive(Debug, Clone, Copy)]
pub struct UniformFlow {
    v0: f64,
    theta0: f64,
    slope: f64,
    gamma: f64,
    theta_inf: f64,
    amplitude: f64,
    params: ThermoParams,
}

impl UniformFlow {
    pub fn new(v0: f64, theta0: f64, slope: f64, params: ThermoParams) -> Result<Self> {
        params.validate()?;
        if params.alpha != 0.0 {
            return Err(Error::InvalidArgument(
                "the uniform-flow reduction closes only for constant viscosity (alpha = 0)"
                    .into(),
            ));
        }
        if !(v0 > 0.0) {
            return Err(Error::NonPositive {
                field: "v0",
                value: v0,
            });
        }
        if !(theta0 > 0.0) {
            return Err(Error::NonPositive {
                field: "theta0",
                value: theta0,
            });
        }
        let amplitude = params.gas_constant * theta0 - params.mu_tilde * slope;
        if !(amplitude > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "induced pressure would not be positive: R theta0 - mu c = {amplitude}"
            )));
        }
        let gamma = params.gas_constant / params.heat_capacity;
        Ok(UniformFlow {
            v0,
            theta0,
            slope,
            gamma,
            theta_inf: params.mu_tilde * slope / params.gas_constant,
            amplitude: amplitude * v0.powf(gamma),
            params,
        })
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    fn volume_at(&self, t: f64) -> Result<f64> {
        let v = self.v0 + self.slope * t;
        if !(v > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "uniform flow evaluated past volume collapse: v({t}) = {v}"
            )));
        }
        Ok(v)
    }

    /// `(v(t), theta(t), p(t))` closed forms.
    pub fn fields_at(&self, t: f64) -> Result<(f64, f64, f64)> {
        let v = self.volume_at(t)?;
        let ratio = (self.v0 / v).powf(self.gamma);
        let theta = self.theta_inf + (self.theta0 - self.theta_inf) * ratio;
        let p = self.amplitude / v.powf(self.gamma + 1.0);
        Ok((v, theta, p))
    }

    /// Initial data sampling `u = c (x - 1/2)` on the nodes.
    pub fn initial_state(&self, grid: &MassGrid) -> Result<FluidState> {
        let n = grid.n_cells();
        let u = grid.nodes().map(|x| self.slope * (x - 0.5)).collect();
        FluidState::new(vec![self.v0; n], u, vec![self.theta0; n], 0.0)
    }

    pub fn params(&self) -> &ThermoParams {
        &self.params
    }
}

impl OuterPressure for UniformFlow {
    fn eval(&self, t: f64) -> Result<(f64, f64)> {
        let v = self.volume_at(t)?;
        let p = self.amplitude / v.powf(self.gamma + 1.0);
        let dp = -(self.gamma + 1.0) * self.slope * self.amplitude / v.powf(self.gamma + 2.0);
        Ok((p, dp))
    }

    fn integral(&self, t: f64) -> Result<f64> {
        let v = self.volume_at(t)?;
        if self.slope == 0.0 {
            return Ok(self.amplitude / self.v0.powf(self.gamma + 1.0) * t);
        }
        let g = self.gamma;
        Ok(self.amplitude * (self.v0.powf(-g) - v.powf(-g)) / (g * self.slope))
    }

    fn limit_pressure(&self) -> f64 {
        if self.slope > 0.0 {
            0.0
        } else {
            self.amplitude / self.v0.powf(self.gamma + 1.0)
        }
    }

    fn tail_variation(&self, t: f64) -> Result<f64> {
        if self.slope < 0.0 {
            return Err(Error::InvalidArgument(
                "compressive uniform flow has no tail: the volume collapses in finite time"
                    .into(),
            ));
        }
        let (p, _) = self.eval(t)?;
        Ok(p - self.limit_pressure())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_slope_is_equilibrium() {
        let f = UniformFlow::new(2.0, 1.0, 0.0, ThermoParams::default()).unwrap();
        let (v, theta, p) = f.fields_at(5.0).unwrap();
        assert_eq!(v, 2.0);
        assert_eq!(theta, 1.0);
        assert!((p - 0.5).abs() < 1e-15);
        let (_, dp) = f.eval(5.0).unwrap();
        assert_eq!(dp, 0.0);
    }

    #[test]
    fn closed_form_reference_point() {
        // v0 = 1, theta0 = 2, c = 0.5 at t = 2: v = 2, theta = 1.25, p = 0.375
        let f = UniformFlow::new(1.0, 2.0, 0.5, ThermoParams::default()).unwrap();
        let (v, theta, p) = f.fields_at(2.0).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
        assert!((theta - 1.25).abs() < 1e-14);
        assert!((p - 0.375).abs() < 1e-14);
    }

    #[test]
    fn temperature_approaches_the_slope_limit() {
        let f = UniformFlow::new(1.0, 2.0, 0.5, ThermoParams::default()).unwrap();
        let (_, theta, p) = f.fields_at(1e6).unwrap();
        assert!((theta - 0.5).abs() < 1e-5);
        assert!(p < 1e-6);
    }

    #[test]
    fn closed_form_matches_fine_ode_integration() {
        // independent fourth-order integration of
        // c_v theta' = c (mu c - R theta) / v
        let params = ThermoParams {
            gas_constant: 1.3,
            heat_capacity: 0.8,
            ..ThermoParams::default()
        };
        let f = UniformFlow::new(1.0, 2.0, 0.5, params).unwrap();
        let rhs = |t: f64, theta: f64| {
            let v = 1.0 + 0.5 * t;
            0.5 * (params.mu_tilde * 0.5 - params.gas_constant * theta)
                / (params.heat_capacity * v)
        };
        let mut theta = 2.0;
        let n = 200_000;
        let h = 2.0 / n as f64;
        for k in 0..n {
            let t = k as f64 * h;
            let k1 = rhs(t, theta);
            let k2 = rhs(t + 0.5 * h, theta + 0.5 * h * k1);
            let k3 = rhs(t + 0.5 * h, theta + 0.5 * h * k2);
            let k4 = rhs(t + h, theta + h * k3);
            theta += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        let (_, theta_closed, _) = f.fields_at(2.0).unwrap();
        assert!(
            (theta - theta_closed).abs() < 1e-12,
            "ode {theta} vs closed {theta_closed}"
        );
    }

    #[test]
    fn derivative_and_integral_are_consistent() {
        let f = UniformFlow::new(1.0, 2.0, 0.5, ThermoParams::default()).unwrap();
        let h = 1e-6;
        for t in [0.1, 1.0, 3.0] {
            let (p, dp) = f.eval(t).unwrap();
            let fd =
                (f.eval(t + h).unwrap().0 - f.eval(t - h).unwrap().0) / (2.0 * h);
            assert!((fd - dp).abs() < 1e-7 * dp.abs().max(1.0));
            let fd_int = (f.integral(t + h).unwrap() - f.integral(t - h).unwrap()) / (2.0 * h);
            assert!((fd_int - p).abs() < 1e-8);
        }
    }

    #[test]
    fn energy_bookkeeping_vanishes_identically() {
        // E(t) - E(0) - int p' v_mean: from closed forms this cancels exactly
        // because c_v (theta - theta0) = -c int p.
        let f = UniformFlow::new(1.0, 2.0, 0.5, ThermoParams::default()).unwrap();
        let c = 0.5;
        let kinetic = c * c / 12.0;
        for t in [0.5, 1.0, 2.0, 4.0] {
            let (v, theta, p) = f.fields_at(t).unwrap();
            let (v0, theta0, p0) = f.fields_at(0.0).unwrap();
            let e_t = theta + kinetic + p * v;
            let e_0 = theta0 + kinetic + p0 * v0;
            // int_0^t p' v dtau = p v - p0 v0 - c int_0^t p
            let work = p * v - p0 * v0 - c * f.integral(t).unwrap();
            let residual = e_t - e_0 - work;
            assert!(residual.abs() < 1e-13, "t = {t}: residual {residual}");
        }
    }

    #[test]
    fn rejects_non_positive_induced_pressure() {
        // R theta0 <= mu c
        assert!(UniformFlow::new(1.0, 0.4, 0.5, ThermoParams::default()).is_err());
    }
}
