use crate::model::{power, FluidState, ThermoParams};
use crate::{Error, Result};

fn check_fields_positive(state: &FluidState) -> Result<()> {
    if !(state.min_v() > 0.0) {
        return Err(Error::NonPositive {
            field: "v",
            value: state.min_v(),
        });
    }
    if !(state.min_theta() > 0.0) {
        return Err(Error::NonPositive {
            field: "theta",
            value: state.min_theta(),
        });
    }
    Ok(())
}

/// Midpoint quadrature of `u^2/2 + (v - ln v) + (theta - ln theta)` with the
/// node velocity interpolated to cell centers. Bounded below by 2 for
/// positive fields.
pub fn entropy_functional(state: &FluidState) -> Result<f64> {
    check_fields_positive(state)?;
    let dx = state.dx();
    let mut acc = 0.0;
    for j in 0..state.n_cells() {
        let u_mid = 0.5 * (state.u()[j] + state.u()[j + 1]);
        let v = state.v()[j];
        let th = state.theta()[j];
        acc += 0.5 * u_mid * u_mid + (v - v.ln()) + (th - th.ln());
    }
    Ok(acc * dx)
}

/// Total energy `int (c_v theta + u^2/2 + p v)` at boundary pressure `p_now`.
pub fn total_energy(state: &FluidState, p_now: f64, params: &ThermoParams) -> f64 {
    let dx = state.dx();
    let mut acc = 0.0;
    for j in 0..state.n_cells() {
        let u_mid = 0.5 * (state.u()[j] + state.u()[j + 1]);
        acc += params.heat_capacity * state.theta()[j]
            + 0.5 * u_mid * u_mid
            + p_now * state.v()[j];
    }
    acc * dx
}

/// Dissipation rate `int (kappa theta_x^2 / (v theta^2) + mu u_x^2 / (v theta))`.
///
/// The velocity term is cell-centered; the temperature term lives on
/// interior faces with zero contributions at the insulated end faces.
pub fn dissipation_v(state: &FluidState, params: &ThermoParams) -> Result<f64> {
    check_fields_positive(state)?;
    let n = state.n_cells();
    let dx = state.dx();
    let mut acc = 0.0;
    for j in 0..n {
        let ux = (state.u()[j + 1] - state.u()[j]) / dx;
        let mu = params.mu_tilde * power(state.theta()[j], params.alpha);
        acc += mu * ux * ux / (state.v()[j] * state.theta()[j]);
    }
    for i in 1..n {
        let tx = (state.theta()[i] - state.theta()[i - 1]) / dx;
        let th_f = 0.5 * (state.theta()[i - 1] + state.theta()[i]);
        let v_f = 0.5 * (state.v()[i - 1] + state.v()[i]);
        let kappa = params.kappa_tilde * power(th_f, params.beta);
        acc += kappa * tx * tx / (v_f * th_f * th_f);
    }
    Ok(acc * dx)
}

/// Squared-gradient quadrature of a cell field: face differences at interior
/// nodes, one-sided quadratic extrapolation at the two boundary nodes,
/// trapezoid weights. Second-order accurate.
fn cell_gradient_square_integral(f: &[f64], dx: f64) -> f64 {
    let n = f.len();
    if n < 2 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 1..n {
        let g = (f[i] - f[i - 1]) / dx;
        acc += g * g;
    }
    if n >= 3 {
        let g_left = (-2.0 * f[0] + 3.0 * f[1] - f[2]) / dx;
        let g_right = (2.0 * f[n - 1] - 3.0 * f[n - 2] + f[n - 3]) / dx;
        acc += 0.5 * (g_left * g_left + g_right * g_right);
    }
    acc * dx
}

/// `(int v_x^2, int u_x^2, int theta_x^2)`.
pub fn grad_norms(state: &FluidState) -> (f64, f64, f64) {
    let dx = state.dx();
    let mut ux2 = 0.0;
    for j in 0..state.n_cells() {
        let g = (state.u()[j + 1] - state.u()[j]) / dx;
        ux2 += g * g;
    }
    ux2 *= dx;
    (
        cell_gradient_square_integral(state.v(), dx),
        ux2,
        cell_gradient_square_integral(state.theta(), dx),
    )
}

/// H^1 distances to the constant reference `(v_ref, 0, theta_ref)`:
/// `(||v - v_ref||_{H^1}, ||u||_{H^1}, ||theta - theta_ref||_{H^1})`.
pub fn h1_distance(state: &FluidState, v_ref: f64, theta_ref: f64) -> (f64, f64, f64) {
    let dx = state.dx();
    let (vx2, ux2, tx2) = grad_norms(state);
    let mut l2v = 0.0;
    let mut l2t = 0.0;
    for j in 0..state.n_cells() {
        l2v += (state.v()[j] - v_ref).powi(2);
        l2t += (state.theta()[j] - theta_ref).powi(2);
    }
    l2v *= dx;
    l2t *= dx;
    let n = state.n_cells();
    let mut l2u = 0.5 * (state.u()[0].powi(2) + state.u()[n].powi(2));
    for &ui in &state.u()[1..n] {
        l2u += ui * ui;
    }
    l2u *= dx;
    (
        (l2v + vx2).sqrt(),
        (l2u + ux2).sqrt(),
        (l2t + tx2).sqrt(),
    )
}

/// Plain statistical variance of a sampled field.
pub fn variance(f: &[f64]) -> f64 {
    if f.is_empty() {
        return 0.0;
    }
    let mean = f.iter().sum::<f64>() / f.len() as f64;
    f.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / f.len() as f64
}

pub(crate) fn cell_mean(f: &[f64]) -> f64 {
    f.iter().sum::<f64>() / f.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn uniform_state(v: f64, u: f64, theta: f64, n: usize) -> FluidState {
        FluidState::new(vec![v; n], vec![u; n + 1], vec![theta; n], 0.0).unwrap()
    }

    #[test]
    fn entropy_functional_reference_values() {
        let s = uniform_state(1.0, 0.0, 1.0, 16);
        assert!((entropy_functional(&s).unwrap() - 2.0).abs() < 1e-15);
        let s = uniform_state(E, 0.0, 1.0, 16);
        assert!((entropy_functional(&s).unwrap() - E).abs() < 1e-14);
        let s = uniform_state(1.0, 1.0, 1.0, 16);
        assert!((entropy_functional(&s).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn entropy_functional_rejects_bad_fields() {
        let s = FluidState::new(vec![1.0; 4], vec![0.0; 5], vec![1.0; 4], 0.0).unwrap();
        assert!(entropy_functional(&s).is_ok());
        // state constructor refuses non-positive fields, so feed a handmade
        // borderline via tiny positive value; the functional still works
        let s = FluidState::new(vec![1e-300; 4], vec![0.0; 5], vec![1.0; 4], 0.0).unwrap();
        assert!(entropy_functional(&s).unwrap().is_finite());
    }

    #[test]
    fn dissipation_zero_iff_uniform() {
        let params = ThermoParams::default();
        let s = uniform_state(0.7, 0.3, 2.0, 32);
        assert_eq!(dissipation_v(&s, &params).unwrap(), 0.0);
    }

    #[test]
    fn dissipation_of_linear_velocity() {
        // u(x) = x gives u_x = 1 so the integral is 1 for unit fields
        let n = 64;
        let u: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let s = FluidState::new(vec![1.0; n], u, vec![1.0; n], 0.0).unwrap();
        for beta in [0.0, 1.0, 2.5] {
            let params = ThermoParams::with_beta(beta);
            assert!((dissipation_v(&s, &params).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    /// Dense-Simpson reference for `int theta_x^2 / theta` (beta = 1, v = 1).
    fn reference_theta_integral(theta: impl Fn(f64) -> f64, theta_x: impl Fn(f64) -> f64) -> f64 {
        let m = 1 << 20;
        let h = 1.0 / m as f64;
        let f = |x: f64| {
            let tx = theta_x(x);
            tx * tx / theta(x)
        };
        let mut acc = f(0.0) + f(1.0);
        for i in 1..m {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn dissipation_matches_reference_quadrature() {
        let n = 256;
        let params = ThermoParams::with_beta(1.0);

        // Profile compatible with the insulated ends (theta_x = 0 there):
        // the face quadrature is second-order against the reference.
        let theta: Vec<f64> = (0..n)
            .map(|j| {
                let x = (2 * j + 1) as f64 / (2 * n) as f64;
                1.0 + 0.5 * (2.0 * PI * x).cos()
            })
            .collect();
        let s = FluidState::new(vec![1.0; n], vec![0.0; n + 1], theta, 0.0).unwrap();
        let got = dissipation_v(&s, &params).unwrap();
        let reference = reference_theta_integral(
            |x| 1.0 + 0.5 * (2.0 * PI * x).cos(),
            |x| -PI * (2.0 * PI * x).sin(),
        );
        assert!(
            (got - reference).abs() < 1e-4 * reference,
            "{got} vs {reference}"
        );

        // A sine profile has nonzero end gradients; the quadrature imposes
        // the insulation convention at the end faces, so the gap is exactly
        // the O(dx) boundary-face content, and no larger.
        let theta: Vec<f64> = (0..n)
            .map(|j| {
                let x = (2 * j + 1) as f64 / (2 * n) as f64;
                1.0 + 0.5 * (2.0 * PI * x).sin()
            })
            .collect();
        let s = FluidState::new(vec![1.0; n], vec![0.0; n + 1], theta, 0.0).unwrap();
        let got = dissipation_v(&s, &params).unwrap();
        let reference = reference_theta_integral(
            |x| 1.0 + 0.5 * (2.0 * PI * x).sin(),
            |x| PI * (2.0 * PI * x).cos(),
        );
        let boundary_content = (1.0 / n as f64) * (PI * PI + PI * PI) / 2.0;
        assert!(
            (got - reference).abs() < boundary_content * 1.1,
            "{got} vs {reference} (boundary content {boundary_content})"
        );
        assert!((got - reference).abs() > boundary_content * 0.5);
    }

    #[test]
    fn grad_norms_reference_values() {
        let s = uniform_state(1.0, 0.0, 1.0, 32);
        assert_eq!(grad_norms(&s), (0.0, 0.0, 0.0));

        let n = 64;
        let u: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let s = FluidState::new(vec![1.0; n], u, vec![1.0; n], 0.0).unwrap();
        assert!((grad_norms(&s).1 - 1.0).abs() < 1e-14);

        // v = 1 + 0.1 sin(2 pi x) at N = 256: integral 0.01 * (2 pi)^2 / 2
        let n = 256;
        let v: Vec<f64> = (0..n)
            .map(|j| {
                let x = (2 * j + 1) as f64 / (2 * n) as f64;
                1.0 + 0.1 * (2.0 * PI * x).sin()
            })
            .collect();
        let s = FluidState::new(v, vec![0.0; n + 1], vec![1.0; n], 0.0).unwrap();
        let exact = 0.01 * (2.0 * PI).powi(2) / 2.0;
        let got = grad_norms(&s).0;
        assert!(
            (got - exact).abs() < 3.0 * exact / (n * n) as f64 * 10.0,
            "{got} vs {exact}"
        );
    }

    #[test]
    fn h1_distance_reference_values() {
        let s = uniform_state(1.0, 0.0, 1.0, 32);
        assert_eq!(h1_distance(&s, 1.0, 1.0), (0.0, 0.0, 0.0));
        let s = uniform_state(1.1, 0.0, 1.0, 32);
        let (dv, du, dt) = h1_distance(&s, 1.0, 1.0);
        assert!((dv - 0.1).abs() < 1e-12);
        assert_eq!(du, 0.0);
        assert_eq!(dt, 0.0);

        // sine perturbation: ||v - 1||_{H1}^2 = a^2/2 + a^2 (2pi)^2 / 2
        let n = 512;
        let a = 0.05;
        let v: Vec<f64> = (0..n)
            .map(|j| {
                let x = (2 * j + 1) as f64 / (2 * n) as f64;
                1.0 + a * (2.0 * PI * x).sin()
            })
            .collect();
        let s = FluidState::new(v, vec![0.0; n + 1], vec![1.0; n], 0.0).unwrap();
        let exact = (a * a / 2.0 * (1.0 + (2.0 * PI).powi(2))).sqrt();
        let (dv, _, _) = h1_distance(&s, 1.0, 1.0);
        assert!((dv - exact).abs() < 1e-4 * exact, "{dv} vs {exact}");
    }

    #[test]
    fn diagnostics_are_bit_deterministic() {
        let n = 128;
        let v: Vec<f64> = (0..n).map(|j| 1.0 + 0.1 * ((j * 7 % 13) as f64 / 13.0)).collect();
        let th: Vec<f64> = (0..n).map(|j| 1.0 + 0.05 * ((j * 5 % 11) as f64 / 11.0)).collect();
        let u: Vec<f64> = (0..=n).map(|i| 0.01 * ((i * 3 % 17) as f64 / 17.0 - 0.5)).collect();
        let s = FluidState::new(v, u, th, 0.0).unwrap();
        let params = ThermoParams::with_beta(1.5);
        assert_eq!(
            entropy_functional(&s).unwrap().to_bits(),
            entropy_functional(&s).unwrap().to_bits()
        );
        assert_eq!(
            dissipation_v(&s, &params).unwrap().to_bits(),
            dissipation_v(&s, &params).unwrap().to_bits()
        );
        let a = grad_norms(&s);
        let b = grad_norms(&s);
        assert_eq!(a.0.to_bits(), b.0.to_bits());
        assert_eq!(a.2.to_bits(), b.2.to_bits());
    }
}
