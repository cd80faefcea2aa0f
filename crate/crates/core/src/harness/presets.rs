use crate::{Error, Result};

use super::config::{
    GridConfig, InitialConfig, OutputConfig, RunConfig, ScheduleConfig, TimeConfig,
};
use crate::model::ThermoParams;

/// Built-in scenario names.
pub const PRESET_NAMES: &[&str] = &[
    "equilibrium",
    "standard-beta05",
    "standard-beta1",
    "standard-beta2",
    "constant-beta1",
    "beta0",
];

fn sine_initial() -> InitialConfig {
    InitialConfig::Sine {
        v_base: 1.0,
        v_amplitude: 0.1,
        wavenumber: 1,
        theta: 1.0,
        u: 0.0,
        phase: None,
        seed: None,
    }
}

fn standard(beta: f64) -> RunConfig {
    RunConfig {
        grid: GridConfig { n: 256 },
        time: TimeConfig {
            dt: 2.5e-4,
            t_end: 200.0,
            theta_floor: 1e-10,
            cfl_factor: None,
        },
        params: ThermoParams::with_beta(beta),
        schedule: ScheduleConfig::Exponential {
            p0: 2.0,
            p_bar: 1.0,
            rate: 1.0,
        },
        initial: sine_initial(),
        output: OutputConfig {
            sample_every: 200,
            ..OutputConfig::default()
        },
    }
}

/// Resolve a preset name to its configuration.
pub fn preset(name: &str) -> Result<RunConfig> {
    let config = match name {
        "equilibrium" => RunConfig {
            grid: GridConfig { n: 64 },
            time: TimeConfig {
                dt: 1e-3,
                t_end: 10.0,
                theta_floor: 1e-10,
                cfl_factor: None,
            },
            params: ThermoParams::with_beta(1.0),
            schedule: ScheduleConfig::Constant { p_bar: 1.0 },
            initial: InitialConfig::Constant {
                v: 1.0,
                u: 0.0,
                theta: 1.0,
            },
            output: OutputConfig {
                sample_every: 50,
                ..OutputConfig::default()
            },
        },
        "standard-beta05" => standard(0.5),
        "standard-beta1" => standard(1.0),
        "standard-beta2" => standard(2.0),
        // out-of-regime contrast: constant conductivity
        "beta0" => standard(0.0),
        "constant-beta1" => RunConfig {
            grid: GridConfig { n: 128 },
            time: TimeConfig {
                dt: 2e-4,
                t_end: 5.0,
                theta_floor: 1e-10,
                cfl_factor: None,
            },
            params: ThermoParams::with_beta(1.0),
            schedule: ScheduleConfig::Constant { p_bar: 1.0 },
            initial: sine_initial(),
            output: OutputConfig {
                sample_every: 50,
                ..OutputConfig::default()
            },
        },
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown preset '{other}' (available: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    debug_assert!(config.validate().is_ok());
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        for name in PRESET_NAMES {
            let c = preset(name).unwrap();
            c.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn theorem_regime_presets() {
        for name in ["standard-beta05", "standard-beta1", "standard-beta2"] {
            assert!(preset(name).unwrap().params.theorem_regime());
        }
        assert!(!preset("beta0").unwrap().params.theorem_regime());
    }

    #[test]
    fn unknown_preset_is_an_error() {
        assert!(preset("no-such-thing").is_err());
    }
}
