use super::ThermoParams;
use crate::{Error, Result};

/// `theta^e` with fast paths for the exponents the presets actually use.
#[inline]
pub(crate) fn power(theta: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e == 1.0 {
        theta
    } else if e == 2.0 {
        theta * theta
    } else if e == 0.5 {
        theta.sqrt()
    } else {
        theta.powf(e)
    }
}

fn check_positive(field: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive { field, value })
    }
}

/// Thermodynamic pressure `R * theta / v`.
pub fn pressure(v: f64, theta: f64, params: &ThermoParams) -> Result<f64> {
    check_positive("v", v)?;
    check_positive("theta", theta)?;
    Ok(params.gas_constant * theta / v)
}

/// Heat conductivity `kappa_tilde * theta^beta`.
pub fn conductivity(theta: f64, params: &ThermoParams) -> Result<f64> {
    check_positive("theta", theta)?;
    Ok(params.kappa_tilde * power(theta, params.beta))
}

/// Viscosity `mu_tilde * theta^alpha`; constant when `alpha = 0`.
pub fn viscosity(theta: f64, params: &ThermoParams) -> Result<f64> {
    check_positive("theta", theta)?;
    Ok(params.mu_tilde * power(theta, params.alpha))
}

/// Total stress `mu(theta) * du_dx / v - R * theta / v`, the quantity the
/// boundary forcing pins to `-p(t)` at both ends.
pub fn stress(du_dx: f64, v: f64, theta: f64, params: &ThermoParams) -> Result<f64> {
    let mu = viscosity(theta, params)?;
    let p = pressure(v, theta, params)?;
    Ok(mu * du_dx / v - p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params_with(alpha: f64, beta: f64, mu_tilde: f64, kappa_tilde: f64) -> ThermoParams {
        ThermoParams {
            alpha,
            beta,
            mu_tilde,
            kappa_tilde,
            ..ThermoParams::default()
        }
    }

    #[test]
    fn pressure_direct_values() {
        let p = ThermoParams::default();
        assert_eq!(pressure(1.0, 1.0, &p).unwrap(), 1.0);
        assert_eq!(pressure(2.0, 1.0, &p).unwrap(), 0.5);
        assert_eq!(pressure(0.5, 2.0, &p).unwrap(), 4.0);
    }

    #[test]
    fn pressure_rejects_non_positive_inputs() {
        let p = ThermoParams::default();
        assert!(matches!(
            pressure(0.0, 1.0, &p),
            Err(Error::NonPositive { field: "v", .. })
        ));
        assert!(matches!(
            pressure(1.0, -2.0, &p),
            Err(Error::NonPositive { field: "theta", .. })
        ));
    }

    #[test]
    fn conductivity_direct_values() {
        assert_eq!(conductivity(5.0, &params_with(0.0, 0.0, 1.0, 1.0)).unwrap(), 1.0);
        assert_eq!(conductivity(1.0, &params_with(0.0, 7.0, 1.0, 3.0)).unwrap(), 3.0);
        assert_eq!(conductivity(3.0, &params_with(0.0, 2.0, 1.0, 1.0)).unwrap(), 9.0);
    }

    #[test]
    fn viscosity_direct_values() {
        assert_eq!(viscosity(9.0, &params_with(0.0, 1.0, 1.0, 1.0)).unwrap(), 1.0);
        assert_eq!(viscosity(1.0, &params_with(3.0, 1.0, 2.0, 1.0)).unwrap(), 2.0);
        assert_eq!(viscosity(4.0, &params_with(0.5, 1.0, 1.0, 1.0)).unwrap(), 2.0);
    }

    #[test]
    fn stress_direct_values() {
        let p = ThermoParams::default();
        assert_eq!(stress(0.0, 1.0, 1.0, &p).unwrap(), -1.0);
        assert_eq!(stress(1.0, 1.0, 1.0, &p).unwrap(), 0.0);
        assert_eq!(stress(2.0, 2.0, 1.0, &p).unwrap(), 0.5);
    }

    proptest! {
        // P * v recovers R * theta up to rounding.
        #[test]
        fn pressure_times_volume_is_r_theta(
            v in 1e-3..1e3f64,
            theta in 1e-3..1e3f64,
            r in 0.1..10.0f64,
        ) {
            let params = ThermoParams { gas_constant: r, ..ThermoParams::default() };
            let p = pressure(v, theta, &params).unwrap();
            let rt = params.gas_constant * theta;
            prop_assert!((p * v - rt).abs() <= 1e-14 * rt.abs());
        }

        // Both power laws are nondecreasing in theta for nonnegative exponents.
        #[test]
        fn power_laws_monotone(
            t1 in 1e-3..1e3f64,
            scale in 1.0..100.0f64,
            expo in 0.0..4.0f64,
        ) {
            let t2 = t1 * scale;
            let params = params_with(expo, expo, 1.0, 1.0);
            prop_assert!(conductivity(t2, &params).unwrap() >= conductivity(t1, &params).unwrap());
            prop_assert!(viscosity(t2, &params).unwrap() >= viscosity(t1, &params).unwrap());
        }

        #[test]
        fn power_fast_paths_match_powf(theta in 1e-3..1e3f64) {
            for e in [0.0, 0.5, 1.0, 2.0] {
                let got = power(theta, e);
                let want = theta.powf(e);
                prop_assert!((got - want).abs() <= 1e-15 * want.abs().max(1.0));
            }
        }
    }
}
