use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::diagnostics::{
    fit_decay_rate, h1_distance, jensen_check, DecayFit, WindowPolicy,
};
use crate::model::{FluidState, PressureSchedule, ThermoParams};
use crate::oracles::stationary_state;
use crate::solver::{init_state, run, RunOutput, SolverConfig};
use crate::{Error, Result};

use super::config::RunConfig;

/// Fixed column order of the time-series CSV.
pub const CSV_HEADER: &str = "t,total_energy,entropy_functional,dissipation_V,theta_mean,v_mean,min_v,max_v,min_theta,max_theta,int_vx2,int_ux2,int_thetax2,momentum,Y,F,energy_residual,h1_v,h1_u,h1_theta";

/// Tolerance used to flag the stationary tail bound as small enough.
pub const STATIONARY_TAIL_TOLERANCE: f64 = 1e-6;

/// A validated configuration together with everything needed to run it.
pub struct PreparedRun {
    pub config: RunConfig,
    pub schedule: PressureSchedule,
    pub params: ThermoParams,
    pub solver: SolverConfig,
    pub initial: FluidState,
    pub initial_momentum: f64,
}

/// Validate a configuration and build the run inputs. Failures here are
/// configuration errors (CLI exit code 2).
pub fn prepare(config: &RunConfig, base_dir: &Path) -> Result<PreparedRun> {
    config.validate()?;
    let grid = config.grid()?;
    let schedule = config.schedule.build()?;
    let descriptor = config.initial.resolve(base_dir)?;
    let (initial, initial_momentum) = init_state(&grid, &descriptor)?;
    Ok(PreparedRun {
        config: config.clone(),
        schedule,
        params: config.params,
        solver: config.solver_config(),
        initial,
        initial_momentum,
    })
}

/// Execute a prepared run in memory.
pub fn execute(prepared: &PreparedRun) -> Result<RunOutput> {
    run(
        &prepared.initial,
        &prepared.schedule,
        &prepared.params,
        &prepared.solver,
        None,
    )
}

/// Flat summary of a terminated run. Wall-clock time is reported on the
/// console but kept out of the JSON artifact so reruns are byte-identical.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_time: Option<f64>,
    pub final_time: Option<f64>,
    pub samples: Option<usize>,
    pub final_min_v: Option<f64>,
    pub final_max_v: Option<f64>,
    pub final_min_theta: Option<f64>,
    pub final_max_theta: Option<f64>,
    pub global_min_v: Option<f64>,
    pub global_min_theta: Option<f64>,
    pub v_hat: Option<f64>,
    pub theta_hat: Option<f64>,
    pub p_bar: Option<f64>,
    pub stationary_correction: Option<f64>,
    pub stationary_uncertainty: Option<f64>,
    pub horizon_sufficient: Option<bool>,
    pub final_h1_v: Option<f64>,
    pub final_h1_u: Option<f64>,
    pub final_h1_theta: Option<f64>,
    pub lambda_h1_u: Option<f64>,
    pub r2_h1_u: Option<f64>,
    pub lambda_int_ux2: Option<f64>,
    pub r2_int_ux2: Option<f64>,
    pub lambda_int_thetax2: Option<f64>,
    pub r2_int_thetax2: Option<f64>,
    pub jensen_margin: Option<f64>,
    pub jensen_pass: Option<bool>,
    pub peak_energy_residual: Option<f64>,
    pub momentum_drift_max: Option<f64>,
    pub initial_boundary_mismatch: Option<f64>,
    pub version: String,
    #[serde(skip)]
    pub wall_seconds: f64,
}

impl RunSummary {
    fn failed(status: &str, error: String, failure_time: Option<f64>, wall: f64) -> Self {
        RunSummary {
            status: status.to_string(),
            error: Some(error),
            failure_time,
            final_time: None,
            samples: None,
            final_min_v: None,
            final_max_v: None,
            final_min_theta: None,
            final_max_theta: None,
            global_min_v: None,
            global_min_theta: None,
            v_hat: None,
            theta_hat: None,
            p_bar: None,
            stationary_correction: None,
            stationary_uncertainty: None,
            horizon_sufficient: None,
            final_h1_v: None,
            final_h1_u: None,
            final_h1_theta: None,
            lambda_h1_u: None,
            r2_h1_u: None,
            lambda_int_ux2: None,
            r2_int_ux2: None,
            lambda_int_thetax2: None,
            r2_int_thetax2: None,
            jensen_margin: None,
            jensen_pass: None,
            peak_energy_residual: None,
            momentum_drift_max: None,
            initial_boundary_mismatch: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_seconds: wall,
        }
    }
}

fn fit_column(
    times: &[f64],
    values: &[f64],
) -> (Option<f64>, Option<f64>) {
    match fit_decay_rate(times, values, WindowPolicy::Default) {
        Ok(DecayFit {
            lambda, r_squared, ..
        }) => (Some(lambda), Some(r_squared)),
        Err(_) => (None, None),
    }
}

/// Build the summary of a completed run.
pub fn summarize(prepared: &PreparedRun, out: &RunOutput, wall_seconds: f64) -> Result<RunSummary> {
    let series = &out.series;
    let rows = &series.rows;
    let final_state = &out.final_state;
    let stationary = stationary_state(
        &prepared.initial,
        &prepared.schedule,
        &prepared.params,
        series,
        final_state.time(),
        STATIONARY_TAIL_TOLERANCE,
    )?;
    let samples: Vec<_> = rows.iter().map(|r| r.sample).collect();
    let jensen = jensen_check(&samples)?;
    let times = series.times();
    let h1_u_series: Vec<f64> = rows.iter().map(|r| r.h1_u).collect();
    let ux2_series: Vec<f64> = rows.iter().map(|r| r.sample.int_ux2).collect();
    let tx2_series: Vec<f64> = rows.iter().map(|r| r.sample.int_thetax2).collect();
    let (lambda_h1_u, r2_h1_u) = fit_column(&times, &h1_u_series);
    let (lambda_int_ux2, r2_int_ux2) = fit_column(&times, &ux2_series);
    let (lambda_int_thetax2, r2_int_thetax2) = fit_column(&times, &tx2_series);
    let (h1_v_final, h1_u_final, h1_theta_final) =
        h1_distance(final_state, stationary.v_hat, stationary.theta_hat);

    Ok(RunSummary {
        status: "completed".to_string(),
        error: None,
        failure_time: None,
        final_time: Some(final_state.time()),
        samples: Some(rows.len()),
        final_min_v: Some(final_state.min_v()),
        final_max_v: Some(final_state.max_v()),
        final_min_theta: Some(final_state.min_theta()),
        final_max_theta: Some(final_state.max_theta()),
        global_min_v: Some(series.global_min_v),
        global_min_theta: Some(series.global_min_theta),
        v_hat: Some(stationary.v_hat),
        theta_hat: Some(stationary.theta_hat),
        p_bar: Some(stationary.p_bar),
        stationary_correction: Some(stationary.correction),
        stationary_uncertainty: Some(stationary.tail_bound),
        horizon_sufficient: Some(stationary.horizon_sufficient),
        final_h1_v: Some(h1_v_final),
        final_h1_u: Some(h1_u_final),
        final_h1_theta: Some(h1_theta_final),
        lambda_h1_u,
        r2_h1_u,
        lambda_int_ux2,
        r2_int_ux2,
        lambda_int_thetax2,
        r2_int_thetax2,
        jensen_margin: Some(jensen.worst_margin),
        jensen_pass: Some(jensen.pass),
        peak_energy_residual: Some(series.peak_energy_residual()),
        momentum_drift_max: Some(series.momentum_drift_max()),
        initial_boundary_mismatch: Some(series.initial_boundary_mismatch),
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_seconds,
    })
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Render the time series with the fixed schema, 17 significant digits.
pub fn series_csv(out: &RunOutput) -> String {
    let mut text = String::with_capacity(out.series.rows.len() * 420 + 256);
    text.push_str(CSV_HEADER);
    text.push('\n');
    for row in &out.series.rows {
        let s = &row.sample;
        let cols = [
            s.t,
            s.total_energy,
            s.entropy_functional,
            s.dissipation_v,
            s.theta_mean,
            s.v_mean,
            s.min_v,
            s.max_v,
            s.min_theta,
            s.max_theta,
            s.int_vx2,
            s.int_ux2,
            s.int_thetax2,
            s.momentum,
            s.y,
            s.f,
            s.energy_residual,
            row.h1_v,
            row.h1_u,
            row.h1_theta,
        ];
        let mut first = true;
        for c in cols {
            if !first {
                text.push(',');
            }
            text.push_str(&fmt(c));
            first = false;
        }
        text.push('\n');
    }
    text
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Write `series.csv`, `summary.json`, the config copy and (optionally) the
/// stored snapshots into the run directory.
pub fn write_artifacts(
    dir: &Path,
    config: &RunConfig,
    summary: &RunSummary,
    out: Option<&RunOutput>,
) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    write_file(&dir.join("config.toml"), &config.to_toml_string())?;
    let json = serde_json::to_string_pretty(summary).expect("summary serializes");
    write_file(&dir.join("summary.json"), &(json + "\n"))?;
    if let Some(out) = out {
        if config.output.write_series {
            write_file(&dir.join("series.csv"), &series_csv(out))?;
        }
        if config.output.write_snapshots {
            let mut text = String::new();
            for snap in out.history.snapshots() {
                let line = serde_json::json!({
                    "t": snap.t,
                    "p": snap.boundary_pressure,
                    "u": snap.u,
                    "theta": snap.theta,
                });
                text.push_str(&line.to_string());
                text.push('\n');
            }
            write_file(&dir.join("snapshots.jsonl"), &text)?;
        }
    }
    Ok(())
}

/// Outcome of a CLI run: the summary plus the exit code to report.
pub struct CliRunOutcome {
    pub summary: RunSummary,
    pub exit_code: i32,
}

/// Full `run` pipeline: prepare, execute, summarize, persist.
///
/// Solver failures still produce a summary (and artifacts when an output
/// directory was given); configuration failures produce nothing.
pub fn run_pipeline(
    config: &RunConfig,
    base_dir: &Path,
    out_dir: Option<&Path>,
) -> Result<CliRunOutcome> {
    let started = Instant::now();
    let prepared = prepare(config, base_dir)?;
    match execute(&prepared) {
        Ok(out) => {
            let summary = summarize(&prepared, &out, started.elapsed().as_secs_f64())?;
            if let Some(dir) = out_dir {
                write_artifacts(dir, config, &summary, Some(&out))?;
            }
            Ok(CliRunOutcome {
                summary,
                exit_code: 0,
            })
        }
        Err(err) => {
            let (status, code, failure_time) = match &err {
                Error::TemperatureFloor { t, .. } => ("floor-breach", 3, Some(*t)),
                Error::VolumeCollapse { t, .. } => ("volume-collapse", 4, Some(*t)),
                Error::NonFinite { t, .. } => ("volume-collapse", 4, Some(*t)),
                _ => return Err(err),
            };
            let summary = RunSummary::failed(
                status,
                err.to_string(),
                failure_time,
                started.elapsed().as_secs_f64(),
            );
            if let Some(dir) = out_dir {
                write_artifacts(dir, config, &summary, None)?;
            }
            Ok(CliRunOutcome {
                summary,
                exit_code: code,
            })
        }
    }
}

/// Parsed numeric CSV with its header row.
pub struct CsvTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Schema("empty CSV".into()))?;
        let columns: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row: std::result::Result<Vec<f64>, _> =
                line.split(',').map(|s| s.trim().parse::<f64>()).collect();
            let row = row.map_err(|e| {
                Error::Schema(format!("line {}: {e}", i + 2))
            })?;
            if row.len() != columns.len() {
                return Err(Error::Schema(format!(
                    "line {}: {} fields, expected {}",
                    i + 2,
                    row.len(),
                    columns.len()
                )));
            }
            rows.push(row);
        }
        Ok(CsvTable { columns, rows })
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self
            .columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| {
                Error::Schema(format!(
                    "no column '{name}' (available: {})",
                    self.columns.join(", ")
                ))
            })?;
        Ok(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// `fit` subcommand: extract a column and fit its decay rate.
pub fn fit_csv_column(
    csv_path: &Path,
    column: &str,
    window_start: Option<f64>,
    window_end: Option<f64>,
) -> Result<(DecayFit, usize)> {
    let text = std::fs::read_to_string(csv_path)
        .map_err(|e| Error::io(csv_path.display().to_string(), e))?;
    let table = CsvTable::parse(&text)?;
    let times = table.column("t")?;
    let values = table.column(column)?;
    let policy = match (window_start, window_end) {
        (None, None) => WindowPolicy::Default,
        (Some(a), None) => WindowPolicy::FromTime(a),
        (Some(a), Some(b)) => WindowPolicy::Window(a, b),
        (None, Some(b)) => WindowPolicy::Window(0.0, b),
    };
    let fit = fit_decay_rate(&times, &values, policy)?;
    Ok((fit, values.len()))
}

/// Console rendering of a summary (one key per line, wall time included).
pub fn print_summary(summary: &RunSummary, out_dir: Option<&PathBuf>) {
    println!("status: {}", summary.status);
    if let Some(err) = &summary.error {
        println!("error: {err}");
    }
    if let Some(t) = summary.final_time {
        println!("final_time: {t}");
    }
    if let (Some(v_hat), Some(theta_hat)) = (summary.v_hat, summary.theta_hat) {
        println!(
            "stationary: v_hat = {v_hat:.12}, theta_hat = {theta_hat:.12} (+/- {:.3e})",
            summary.stationary_uncertainty.unwrap_or(f64::NAN)
        );
    }
    if let Some(m) = summary.jensen_margin {
        println!("jensen_margin: {m:.6}");
    }
    if let Some(l) = summary.lambda_h1_u {
        println!(
            "decay h1_u: lambda = {l:.6}, r2 = {:.6}",
            summary.r2_h1_u.unwrap_or(f64::NAN)
        );
    }
    if let Some(p) = summary.peak_energy_residual {
        println!("peak_energy_residual: {p:.3e}");
    }
    if let Some(d) = summary.momentum_drift_max {
        println!("momentum_drift_max: {d:.3e}");
    }
    if let Some(dir) = out_dir {
        println!("artifacts: {}", dir.display());
    }
    println!("wall_seconds: {:.3}", summary.wall_seconds);
}
