use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Constitutive constants of the ideal polytropic gas model.
///
/// The equation of state is `P = gas_constant * theta / v` with internal
/// energy `heat_capacity * theta`. Viscosity and heat conductivity follow
/// power laws in temperature: `mu_tilde * theta^alpha` and
/// `kappa_tilde * theta^beta`.
///
/// Defaults normalize every coefficient to one with `alpha = 0` (constant
/// viscosity) and `beta = 1` (linearly degenerate conductivity), so the model
/// identities take their simplest form out of the box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThermoParams {
    /// Specific gas constant R.
    pub gas_constant: f64,
    /// Heat capacity at constant volume c_v.
    pub heat_capacity: f64,
    /// Viscosity prefactor.
    pub mu_tilde: f64,
    /// Conductivity prefactor.
    pub kappa_tilde: f64,
    /// Viscosity temperature exponent (>= 0).
    pub alpha: f64,
    /// Conductivity temperature exponent (>= 0).
    pub beta: f64,
}

impl Default for ThermoParams {
    fn default() -> Self {
        ThermoParams {
            gas_constant: 1.0,
            heat_capacity: 1.0,
            mu_tilde: 1.0,
            kappa_tilde: 1.0,
            alpha: 0.0,
            beta: 1.0,
        }
    }
}

impl ThermoParams {
    /// Normalized constants with the given conductivity exponent.
    pub fn with_beta(beta: f64) -> Self {
        ThermoParams {
            beta,
            ..ThermoParams::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (field, value) in [
            ("gas_constant", self.gas_constant),
            ("heat_capacity", self.heat_capacity),
            ("mu_tilde", self.mu_tilde),
            ("kappa_tilde", self.kappa_tilde),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositive { field, value });
            }
        }
        for (field, value) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "{field} must be a finite value >= 0, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// True in the constant-viscosity, degenerate-conductivity regime
    /// (`alpha = 0`, `beta > 0`) that the convergence statements cover.
    pub fn theorem_regime(&self) -> bool {
        self.alpha == 0.0 && self.beta > 0.0
    }
}
