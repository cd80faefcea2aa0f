//! Crate-wide error type.

/// Everything that can go wrong across the model, solver, diagnostics and
/// harness layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A quantity that must be strictly positive was not.
    #[error("{field} must be positive, got {value}")]
    NonPositive { field: &'static str, value: f64 },

    /// A parameter or argument failed validation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An invalid pressure schedule (non-positive values, bad knots, ...).
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    /// Evaluation of a tabulated schedule outside its knot range.
    #[error("schedule evaluated at t = {t} outside tabulated range [{t_min}, {t_max}]")]
    ScheduleRange { t: f64, t_min: f64, t_max: f64 },

    /// Initial data with a non-positive sample.
    #[error("initial data: {field}[{index}] = {value} is not positive")]
    InvalidInitialData {
        field: &'static str,
        index: usize,
        value: f64,
    },

    /// Temperature dropped below the configured guard during a step.
    #[error("temperature-floor breach at t = {t}: min theta = {min_theta:e} < floor {floor:e}")]
    TemperatureFloor { t: f64, min_theta: f64, floor: f64 },

    /// Specific volume reached zero or below during a step.
    #[error("volume collapse at t = {t}: min v = {min_v:e}")]
    VolumeCollapse { t: f64, min_v: f64 },

    /// A field stopped being finite during a step.
    #[error("non-finite {field} at t = {t}")]
    NonFinite { field: &'static str, t: f64 },

    /// A state history does not cover the requested time.
    #[error("history does not cover t = {t}: {reason}")]
    HistoryCoverage { t: f64, reason: String },

    /// A diagnostics series was not chronological.
    #[error("series is not chronological at index {index} (t = {t})")]
    UnsortedSeries { index: usize, t: f64 },

    /// Too few usable points for a decay fit.
    #[error("decay fit needs at least {needed} points above the floor, found {found}")]
    InsufficientData { needed: usize, found: usize },

    /// `x - ln x = c0` has no real roots below `c0 = 1`.
    #[error("x - ln x = {c0} has no real roots (requires c0 >= 1)")]
    JensenDomain { c0: f64 },

    /// Configuration file problems, with parse context where available.
    #[error("config error: {0}")]
    Config(String),

    /// CSV schema mismatches seen by `fit` and `report`.
    #[error("schema mismatch: {0}")]
    Schema(String),

    /// A run directory is missing expected artifacts.
    #[error("missing run artifacts: {}", .0.join(", "))]
    MissingArtifacts(Vec<String>),

    /// Unknown verification suite name.
    #[error("unknown suite '{0}' (expected one of: conservation, oracles, mms, convergence-to-stationary, bounds)")]
    UnknownSuite(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
