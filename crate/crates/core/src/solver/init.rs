use crate::model::{viscosity, FluidState, MassGrid, OuterPressure, ThermoParams};
use crate::{Error, Result};

/// Initial-data descriptors the solver can sample onto a grid.
#[derive(Debug, Clone)]
pub enum InitialData {
    /// Uniform fields.
    Constant { v: f64, u: f64, theta: f64 },
    /// `v0(x) = v_base + v_amplitude * sin(2 pi wavenumber x + phase)` with
    /// uniform velocity and temperature.
    SinePerturbed {
        v_base: f64,
        v_amplitude: f64,
        wavenumber: u32,
        phase: f64,
        u: f64,
        theta: f64,
    },
    /// Fields given point-by-point (cell values for v and theta, node values
    /// for u), e.g. loaded from a file by the harness.
    Fields {
        v: Vec<f64>,
        u: Vec<f64>,
        theta: Vec<f64>,
    },
}

/// Sample initial data onto the staggered grid.
///
/// Returns the state at t = 0 together with the trapezoid-weighted initial
/// momentum, which is recorded (the analysis normalizes it to zero, the
/// artifact does not force that).
pub fn init_state(grid: &MassGrid, initial: &InitialData) -> Result<(FluidState, f64)> {
    let n = grid.n_cells();
    let (v, u, theta) = match initial {
        InitialData::Constant { v, u, theta } => (
            vec![*v; n],
            vec![*u; n + 1],
            vec![*theta; n],
        ),
        InitialData::SinePerturbed {
            v_base,
            v_amplitude,
            wavenumber,
            phase,
            u,
            theta,
        } => {
            let k = 2.0 * std::f64::consts::PI * f64::from(*wavenumber);
            let v = grid
                .cell_centers()
                .map(|x| v_base + v_amplitude * (k * x + phase).sin())
                .collect();
            (v, vec![*u; n + 1], vec![*theta; n])
        }
        InitialData::Fields { v, u, theta } => {
            if v.len() != n || theta.len() != n || u.len() != n + 1 {
                return Err(Error::InvalidArgument(format!(
                    "field initial data does not match the grid: need v/theta of length {n} and u of length {}, got {}/{}/{}",
                    n + 1,
                    v.len(),
                    theta.len(),
                    u.len()
                )));
            }
            (v.clone(), u.clone(), theta.clone())
        }
    };
    let state = FluidState::new(v, u, theta, 0.0)?;
    let momentum = trapezoid_momentum(state.u(), grid.dx());
    Ok((state, momentum))
}

/// Trapezoid-weighted momentum of a state; this is the quantity the scheme
/// conserves across steps.
pub fn trapezoid_momentum_of(state: &FluidState) -> f64 {
    trapezoid_momentum(state.u(), state.dx())
}

/// Trapezoid-weighted node sum.
pub(crate) fn trapezoid_momentum(u: &[f64], dx: f64) -> f64 {
    let n = u.len() - 1;
    let mut acc = 0.5 * (u[0] + u[n]);
    for &ui in &u[1..n] {
        acc += ui;
    }
    acc * dx
}

/// Boundary data the scheme imposes at time `t`: the total stress at both
/// end faces and the (zero) conductive heat flux through them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryValues {
    pub stress_left: f64,
    pub stress_right: f64,
    pub heat_flux_left: f64,
    pub heat_flux_right: f64,
}

/// Evaluate the imposed boundary data for a state at time `t`.
pub fn apply_boundary(
    _state: &FluidState,
    t: f64,
    schedule: &dyn OuterPressure,
) -> Result<BoundaryValues> {
    let (p, _) = schedule.eval(t)?;
    Ok(BoundaryValues {
        stress_left: -p,
        stress_right: -p,
        heat_flux_left: 0.0,
        heat_flux_right: 0.0,
    })
}

/// `|sigma(0, 0) + p(0)|`-style compatibility mismatch of initial data with
/// the imposed boundary stress, reported as a diagnostic (the model does not
/// require exact compatibility).
pub fn initial_boundary_mismatch(
    state: &FluidState,
    schedule: &dyn OuterPressure,
    params: &ThermoParams,
) -> Result<f64> {
    let (p0, _) = schedule.eval(state.time())?;
    let n = state.n_cells();
    let dx = state.dx();
    let sigma = |j: usize| -> Result<f64> {
        let du = (state.u()[j + 1] - state.u()[j]) / dx;
        let mu = viscosity(state.theta()[j], params)?;
        Ok(mu * du / state.v()[j] - params.gas_constant * state.theta()[j] / state.v()[j])
    };
    let left = (sigma(0)? + p0).abs();
    let right = (sigma(n - 1)? + p0).abs();
    Ok(left.max(right))
}
