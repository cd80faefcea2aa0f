use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::model::{MassGrid, PressureSchedule, ThermoParams};
use crate::solver::{InitialData, SolverConfig};
use crate::{Error, Result};

/// A complete run description, read from a TOML file with dotted keys
/// (`grid.n`, `time.dt`, `schedule.kind`, ...).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub time: TimeConfig,
    #[serde(default)]
    pub params: ThermoParams,
    pub schedule: ScheduleConfig,
    pub initial: InitialConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_theta_floor")]
    pub theta_floor: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cfl_factor: Option<f64>,
}

fn default_theta_floor() -> f64 {
    1e-10
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ScheduleConfig {
    Constant {
        p_bar: f64,
    },
    Exponential {
        p0: f64,
        p_bar: f64,
        rate: f64,
    },
    Smoothstep {
        p0: f64,
        p1: f64,
        t0: f64,
        t1: f64,
    },
    Tabulated {
        times: Vec<f64>,
        values: Vec<f64>,
    },
}

impl ScheduleConfig {
    pub fn build(&self) -> Result<PressureSchedule> {
        match self {
            ScheduleConfig::Constant { p_bar } => PressureSchedule::constant(*p_bar),
            ScheduleConfig::Exponential { p0, p_bar, rate } => {
                PressureSchedule::exponential(*p0, *p_bar, *rate)
            }
            ScheduleConfig::Smoothstep { p0, p1, t0, t1 } => {
                PressureSchedule::smoothstep(*p0, *p1, *t0, *t1)
            }
            ScheduleConfig::Tabulated { times, values } => {
                PressureSchedule::tabulated(times.clone(), values.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialConfig {
    Constant {
        v: f64,
        u: f64,
        theta: f64,
    },
    /// Sine-perturbed volume; the phase comes from `phase` if given, else
    /// a seeded draw, else zero.
    Sine {
        v_base: f64,
        v_amplitude: f64,
        wavenumber: u32,
        theta: f64,
        u: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phase: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    /// JSON file with arrays `v` (n), `u` (n+1), `theta` (n).
    File {
        path: String,
    },
}

#[derive(Debug, Clone, Deserialize)]
struct FieldFile {
    v: Vec<f64>,
    u: Vec<f64>,
    theta: Vec<f64>,
}

impl InitialConfig {
    pub fn resolve(&self, base_dir: &Path) -> Result<InitialData> {
        match self {
            InitialConfig::Constant { v, u, theta } => Ok(InitialData::Constant {
                v: *v,
                u: *u,
                theta: *theta,
            }),
            InitialConfig::Sine {
                v_base,
                v_amplitude,
                wavenumber,
                theta,
                u,
                phase,
                seed,
            } => {
                let phase = match (phase, seed) {
                    (Some(p), _) => *p,
                    (None, Some(s)) => {
                        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*s);
                        rng.random::<f64>() * 2.0 * std::f64::consts::PI
                    }
                    (None, None) => 0.0,
                };
                Ok(InitialData::SinePerturbed {
                    v_base: *v_base,
                    v_amplitude: *v_amplitude,
                    wavenumber: *wavenumber,
                    phase,
                    u: *u,
                    theta: *theta,
                })
            }
            InitialConfig::File { path } => {
                let full = base_dir.join(path);
                let text = std::fs::read_to_string(&full)
                    .map_err(|e| Error::io(full.display().to_string(), e))?;
                let fields: FieldFile = serde_json::from_str(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", full.display())))?;
                Ok(InitialData::Fields {
                    v: fields.v,
                    u: fields.u,
                    theta: fields.theta,
                })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Steps between diagnostics samples / snapshots; 0 selects a stride
    /// giving roughly 200 snapshots per unit time.
    pub sample_every: usize,
    pub write_series: bool,
    pub write_snapshots: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            sample_every: 0,
            write_series: true,
            write_snapshots: false,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("run config serializes")
    }

    /// Snapshot/sample stride, resolving the automatic default.
    pub fn sample_stride(&self) -> usize {
        if self.output.sample_every == 0 {
            SolverConfig::stride_for_snapshot_density(self.time.dt, 200.0)
        } else {
            self.output.sample_every
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            dt: self.time.dt,
            t_end: self.time.t_end,
            theta_floor: self.time.theta_floor,
            cfl_factor: self.time.cfl_factor,
            mms_enabled: false,
            store_history_every: self.sample_stride(),
        }
    }

    pub fn grid(&self) -> Result<MassGrid> {
        MassGrid::new(self.grid.n)
    }

    pub fn validate(&self) -> Result<()> {
        MassGrid::new(self.grid.n)?;
        self.params.validate()?;
        self.solver_config().validate()?;
        let schedule = self.schedule.build()?;
        // the whole horizon must be evaluable and positive
        schedule
            .eval(self.time.t_end)
            .map_err(|e| Error::Config(format!("schedule does not cover t_end: {e}")))?;
        schedule.stats(self.time.t_end.max(f64::MIN_POSITIVE))?;
        Ok(())
    }
}
