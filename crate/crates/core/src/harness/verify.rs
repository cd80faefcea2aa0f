use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use crate::diagnostics::{fit_decay_rate, h1_distance, jensen_bounds, jensen_check, variance, WindowPolicy};
use crate::model::{MassGrid, ThermoParams};
use crate::oracles::{equilibrium_state, reconstruct_profile, stationary_state, MmsCase, UniformFlow};
use crate::solver::{run, RunOutput, SolverConfig, StateHistory};
use crate::{Error, Result};

use super::pipeline::{execute, prepare, PreparedRun, STATIONARY_TAIL_TOLERANCE};
use super::presets::preset;

/// Desk-scale verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Conservation,
    Oracles,
    Mms,
    Stationary,
    Bounds,
}

pub const SUITE_NAMES: &[&str] = &[
    "conservation",
    "oracles",
    "mms",
    "convergence-to-stationary",
    "bounds",
];

impl Suite {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "conservation" => Ok(Suite::Conservation),
            "oracles" => Ok(Suite::Oracles),
            "mms" => Ok(Suite::Mms),
            "convergence-to-stationary" => Ok(Suite::Stationary),
            "bounds" => Ok(Suite::Bounds),
            other => Err(Error::UnknownSuite(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Conservation => "conservation",
            Suite::Oracles => "oracles",
            Suite::Mms => "mms",
            Suite::Stationary => "convergence-to-stationary",
            Suite::Bounds => "bounds",
        }
    }

    pub fn all() -> [Suite; 5] {
        [
            Suite::Conservation,
            Suite::Oracles,
            Suite::Mms,
            Suite::Stationary,
            Suite::Bounds,
        ]
    }
}

/// One acceptance criterion outcome with its measured margin.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    fn new(name: &'static str, pass: bool, detail: String) -> Self {
        CriterionResult { name, pass, detail }
    }
}

/// Print one line per criterion; returns whether everything passed.
pub fn print_results(results: &[CriterionResult]) -> bool {
    for r in results {
        println!("{} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail);
    }
    results.iter().all(|r| r.pass)
}

pub fn run_suite(suite: Suite) -> Result<Vec<CriterionResult>> {
    match suite {
        Suite::Conservation => conservation_suite(),
        Suite::Oracles => oracles_suite(),
        Suite::Mms => mms_suite(),
        Suite::Stationary => stationary_suite(),
        Suite::Bounds => bounds_suite(),
    }
}

/// Worker cap for independent runs inside a suite: the smaller of the
/// OUTERPRESS_THREADS value (when set) and the available parallelism.
fn thread_cap(jobs: usize) -> usize {
    let hw = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let cap = std::env::var("OUTERPRESS_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(hw);
    cap.min(hw).min(jobs).max(1)
}

/// Run independent closures on up to `thread_cap` workers, keeping order.
fn run_parallel<T, F>(jobs: Vec<F>) -> Vec<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    let n = jobs.len();
    let cap = thread_cap(n);
    if cap <= 1 {
        return jobs.into_iter().map(|f| f()).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<T>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let jobs: Vec<Mutex<Option<F>>> = jobs.into_iter().map(|f| Mutex::new(Some(f))).collect();
    std::thread::scope(|scope| {
        for _ in 0..cap {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let f = jobs[i].lock().unwrap().take().unwrap();
                *slots[i].lock().unwrap() = Some(f());
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().unwrap().unwrap())
        .collect()
}

fn run_preset_named(name: &str) -> Result<(PreparedRun, RunOutput, f64)> {
    let config = preset(name)?;
    let prepared = prepare(&config, Path::new("."))?;
    let started = Instant::now();
    let out = execute(&prepared)?;
    Ok((prepared, out, started.elapsed().as_secs_f64()))
}

/// `int u^2 dx` (trapezoid over nodes) along the stored snapshots.
fn kinetic_l2_series(history: &StateHistory) -> (Vec<f64>, Vec<f64>) {
    let mut ts = Vec::new();
    let mut vals = Vec::new();
    for snap in history.snapshots() {
        let n = snap.u.len() - 1;
        let dx = 1.0 / n as f64;
        let mut acc = 0.5 * (snap.u[0] * snap.u[0] + snap.u[n] * snap.u[n]);
        for &ui in &snap.u[1..n] {
            acc += ui * ui;
        }
        ts.push(snap.t);
        vals.push(acc * dx);
    }
    (ts, vals)
}

/// Least-squares slope of `ln err` against `ln dx`.
fn observed_order(dxs: &[f64], errs: &[f64]) -> f64 {
    let n = dxs.len() as f64;
    let xs: Vec<f64> = dxs.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    sxy / sxx
}

// --- conservation ---------------------------------------------------------

fn conservation_suite() -> Result<Vec<CriterionResult>> {
    let mut results = Vec::new();

    // criterion 1: the equilibrium state is a fixed point
    {
        let grid = MassGrid::new(64)?;
        let params = ThermoParams::with_beta(1.0);
        let initial = equilibrium_state(1.0, 1.0, &grid, &params)?;
        let schedule = crate::model::PressureSchedule::constant(1.0)?;
        let config = SolverConfig {
            dt: 1e-3,
            t_end: 10.0,
            store_history_every: 100,
            ..SolverConfig::default()
        };
        let started = Instant::now();
        let out = run(&initial, &schedule, &params, &config, None)?;
        let wall = started.elapsed().as_secs_f64();
        let drift = out.final_state.max_norm_distance(&initial);
        let sampled_drift = out
            .series
            .rows
            .iter()
            .map(|r| {
                (r.sample.min_v - 1.0)
                    .abs()
                    .max((r.sample.max_v - 1.0).abs())
                    .max((r.sample.min_theta - 1.0).abs())
                    .max((r.sample.max_theta - 1.0).abs())
                    .max(r.sample.momentum.abs())
            })
            .fold(0.0, f64::max);
        let worst = drift.max(sampled_drift);
        let pass = worst < 1e-10 && wall < 5.0;
        results.push(CriterionResult::new(
            "1-fixed-point",
            pass,
            format!("max drift {worst:.3e} (< 1e-10), runtime {wall:.2} s (< 5 s)"),
        ));
    }

    // criterion 2: trapezoid-weighted momentum is conserved on the standard
    // scenario through t_end = 200
    {
        let (_, out, wall) = run_preset_named("standard-beta1")?;
        let drift = out.series.momentum_drift_max();
        let pass = drift < 1e-11 && wall < 60.0;
        results.push(CriterionResult::new(
            "2-momentum-conservation",
            pass,
            format!("max |momentum(t) - momentum(0)| = {drift:.3e} (< 1e-11), runtime {wall:.1} s (< 60 s)"),
        ));
    }

    // criterion 3: the energy identity converges at first order in dt
    {
        let dts = [4e-4, 2e-4, 1e-4];
        let jobs: Vec<_> = dts
            .iter()
            .map(|&dt| {
                move || -> Result<f64> {
                    let mut config = preset("constant-beta1")?;
                    config.time.dt = dt;
                    let prepared = prepare(&config, Path::new("."))?;
                    let out = execute(&prepared)?;
                    let rows = &out.series.rows;
                    let e0 = rows[0].sample.total_energy;
                    let e_end = rows.last().unwrap().sample.total_energy;
                    Ok((e_end - e0).abs())
                }
            })
            .collect();
        let drifts: Vec<f64> = run_parallel(jobs)
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let r1 = drifts[0] / drifts[1];
        let r2 = drifts[1] / drifts[2];
        let pass = (1.7..=2.3).contains(&r1) && (1.7..=2.3).contains(&r2);
        results.push(CriterionResult::new(
            "3-energy-identity-richardson",
            pass,
            format!(
                "|E(5) - E(0)| = {:.3e} / {:.3e} / {:.3e} at dt = 4e-4 / 2e-4 / 1e-4; halving ratios {r1:.3}, {r2:.3} (within [1.7, 2.3])",
                drifts[0], drifts[1], drifts[2]
            ),
        ));
    }

    Ok(results)
}

// --- oracles ---------------------------------------------------------------

/// Standard scenario truncated for the representation check.
fn representation_gap(n: usize, dt: f64, stride: usize) -> Result<f64> {
    let mut config = preset("standard-beta1")?;
    config.grid.n = n;
    config.time.dt = dt;
    config.time.t_end = 1.0;
    config.output.sample_every = stride;
    let prepared = prepare(&config, Path::new("."))?;
    let out = execute(&prepared)?;
    let v_rec = reconstruct_profile(1.0, &out.history, &prepared.schedule)?;
    let v_sol = out.final_state.v();
    let mut worst = 0.0f64;
    for j in 0..n {
        worst = worst.max((v_rec[j] - v_sol[j]).abs() / v_sol[j].abs());
    }
    Ok(worst)
}

fn oracles_suite() -> Result<Vec<CriterionResult>> {
    let mut results = Vec::new();

    // criterion 5: volume representation formula against the solver
    {
        let jobs: Vec<Box<dyn FnOnce() -> Result<f64> + Send>> = vec![
            Box::new(|| representation_gap(256, 1e-4, 50)),
            Box::new(|| representation_gap(128, 4e-4, 12)),
        ];
        let gaps = run_parallel(jobs)
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let (fine, coarse) = (gaps[0], gaps[1]);
        let pass = fine < 1e-2 && fine < coarse;
        results.push(CriterionResult::new(
            "5-representation-formula",
            pass,
            format!(
                "relative max-norm gap {fine:.3e} at N = 256 (< 1e-2), {coarse:.3e} at N = 128 (shrinks under refinement)"
            ),
        ));
    }

    // criterion 6: injected uniform flow is reproduced to closed forms
    {
        let params = ThermoParams::with_beta(1.0);
        let flow = UniformFlow::new(1.0, 2.0, 0.5, params)?;
        let grid = MassGrid::new(64)?;
        let initial = flow.initial_state(&grid)?;
        let config = SolverConfig {
            dt: 1e-4,
            t_end: 2.0,
            store_history_every: 200,
            ..SolverConfig::default()
        };
        let out = run(&initial, &flow, &params, &config, None)?;
        let (v_ref, th_ref, _) = flow.fields_at(2.0)?;
        let state = &out.final_state;
        let mut rel_v = 0.0f64;
        let mut rel_th = 0.0f64;
        for j in 0..state.n_cells() {
            rel_v = rel_v.max((state.v()[j] - v_ref).abs() / v_ref);
            rel_th = rel_th.max((state.theta()[j] - th_ref).abs() / th_ref);
        }
        let c = flow.slope();
        let u_residual: Vec<f64> = (0..=state.n_cells())
            .map(|i| {
                let x = i as f64 / state.n_cells() as f64;
                state.u()[i] - c * (x - 0.5)
            })
            .collect();
        let rel_u = u_residual.iter().fold(0.0f64, |a, r| a.max(r.abs())) / (0.5 * c);
        let var_v = variance(state.v());
        let var_th = variance(state.theta());
        let var_u = variance(&u_residual);
        let worst_var = var_v.max(var_th).max(var_u);
        let worst_rel = rel_v.max(rel_th).max(rel_u);
        let pass = worst_rel < 1e-4 && worst_var < 1e-10;
        results.push(CriterionResult::new(
            "6-uniform-flow-exactness",
            pass,
            format!(
                "relative errors v {rel_v:.2e}, theta {rel_th:.2e}, u {rel_u:.2e} (< 1e-4); worst spatial variance {worst_var:.2e} (< 1e-10)"
            ),
        ));
    }

    Ok(results)
}

// --- manufactured solutions -------------------------------------------------

fn mms_suite() -> Result<Vec<CriterionResult>> {
    let ladder = [32usize, 64, 128, 256];
    let params = ThermoParams::with_beta(1.0);
    let jobs: Vec<_> = ladder
        .iter()
        .map(|&n| {
            move || -> Result<(f64, f64, f64)> {
                let case = MmsCase::standard(params)?;
                let grid = MassGrid::new(n)?;
                let initial = case.initial_state(&grid)?;
                let dx = grid.dx();
                let config = SolverConfig {
                    dt: dx * dx,
                    t_end: 0.5,
                    mms_enabled: true,
                    store_history_every: usize::MAX / 2,
                    ..SolverConfig::default()
                };
                let out = run(&initial, &case, &params, &config, Some(&case))?;
                Ok(case.l2_error(&out.final_state))
            }
        })
        .collect();
    let errors = run_parallel(jobs)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let dxs: Vec<f64> = ladder.iter().map(|&n| 1.0 / n as f64).collect();
    let ev: Vec<f64> = errors.iter().map(|e| e.0).collect();
    let eu: Vec<f64> = errors.iter().map(|e| e.1).collect();
    let eth: Vec<f64> = errors.iter().map(|e| e.2).collect();
    let order_v = observed_order(&dxs, &ev);
    let order_u = observed_order(&dxs, &eu);
    let order_th = observed_order(&dxs, &eth);
    let pass = order_v >= 1.9 && order_u >= 1.9 && order_th >= 1.9;
    Ok(vec![CriterionResult::new(
        "4-mms-convergence",
        pass,
        format!(
            "observed L2 orders: v {order_v:.2}, u {order_u:.2}, theta {order_th:.2} (each >= 1.9); errors at N=256: {:.2e} / {:.2e} / {:.2e}",
            ev[3], eu[3], eth[3]
        ),
    )])
}

// --- convergence to the stationary state ------------------------------------

fn stationary_suite() -> Result<Vec<CriterionResult>> {
    let mut results = Vec::new();
    let jobs: Vec<Box<dyn FnOnce() -> Result<(PreparedRun, RunOutput, f64)> + Send>> = vec![
        Box::new(|| run_preset_named("standard-beta1")),
        Box::new(|| run_preset_named("constant-beta1")),
    ];
    let mut outs = run_parallel(jobs).into_iter().collect::<Result<Vec<_>>>()?;
    let (prep_const, out_const, _) = outs.pop().unwrap();
    let (prep_std, out_std, _) = outs.pop().unwrap();

    // criterion 9: H1 convergence to the predicted stationary state
    {
        let stationary = stationary_state(
            &prep_std.initial,
            &prep_std.schedule,
            &prep_std.params,
            &out_std.series,
            out_std.final_state.time(),
            STATIONARY_TAIL_TOLERANCE,
        )?;
        let (h1_v, h1_u, _) =
            h1_distance(&out_std.final_state, stationary.v_hat, stationary.theta_hat);
        let last = out_std.series.rows.last().unwrap().sample;
        let gap_v = (last.v_mean - stationary.v_hat).abs();
        let gap_th = (last.theta_mean - stationary.theta_hat).abs();
        let budget = stationary.tail_bound + 1e-4;
        let balance = (prep_std.params.gas_constant * stationary.theta_hat
            - stationary.p_bar * stationary.v_hat)
            .abs();
        let pass = h1_u < 1e-5 && gap_v < budget && gap_th < budget && h1_v < 1e-3 && balance <= 1e-12;
        results.push(CriterionResult::new(
            "9-stationary-convergence",
            pass,
            format!(
                "||u||_H1 = {h1_u:.2e} (< 1e-5); |v_mean - v_hat| = {gap_v:.2e}, |theta_mean - theta_hat| = {gap_th:.2e} (< {budget:.2e}); ||v - v_hat||_H1 = {h1_v:.2e} (< 1e-3); balance residual {balance:.2e} (<= 1e-12)"
            ),
        ));
    }

    // criterion 10: measured exponential decay and the constant-schedule envelope
    {
        let (ts, kinetic) = kinetic_l2_series(&out_std.history);
        let fit = fit_decay_rate(&ts, &kinetic, WindowPolicy::Default)?;
        let mut env_gap = 0.0f64;
        let p_bar = prep_const.schedule.limit_pressure();
        for row in &out_const.series.rows {
            let expect = (-2.0 * p_bar * row.sample.t).exp();
            env_gap = env_gap.max((row.sample.f - expect).abs());
        }
        let pass = fit.lambda > 0.0 && fit.r_squared > 0.99 && env_gap < 1e-10;
        results.push(CriterionResult::new(
            "10-exponential-decay",
            pass,
            format!(
                "int u^2 decay: lambda = {:.4} (> 0), r2 = {:.5} (> 0.99); constant-schedule F vs exp(-2 p t): max gap {env_gap:.2e} (< 1e-10)",
                fit.lambda, fit.r_squared
            ),
        ));
    }

    Ok(results)
}

// --- uniform bounds and the mean-temperature bracket -------------------------

fn bounds_suite() -> Result<Vec<CriterionResult>> {
    let mut results = Vec::new();
    let names = ["standard-beta05", "standard-beta1", "standard-beta2"];
    let jobs: Vec<_> = names
        .iter()
        .map(|&name| move || run_preset_named(name))
        .collect();
    let longs = run_parallel(jobs).into_iter().collect::<Result<Vec<_>>>()?;
    let (_, eq_out, _) = run_preset_named("equilibrium")?;
    let (_, const_out, _) = run_preset_named("constant-beta1")?;

    // criterion 7: fields never approach their floors on the theorem-regime presets
    {
        let mut detail = String::new();
        let mut pass = true;
        for (name, (_, out, _)) in names.iter().zip(&longs) {
            let (mv, mth) = (out.series.global_min_v, out.series.global_min_theta);
            pass &= mv > 0.05 && mth > 0.05;
            detail.push_str(&format!("{name}: min v {mv:.3}, min theta {mth:.3}; "));
        }
        detail.push_str("(each > 0.05, no floor breaches)");
        results.push(CriterionResult::new("7-uniform-bounds", pass, detail));
    }

    // criterion 8: the mean temperature stays inside the convexity bracket
    {
        let mut worst_margin = f64::INFINITY;
        let mut pass = true;
        let long_outs = longs.iter().map(|(_, out, _)| out);
        for out in long_outs.chain([&eq_out, &const_out]) {
            let samples: Vec<_> = out.series.rows.iter().map(|r| r.sample).collect();
            let report = jensen_check(&samples)?;
            pass &= report.pass;
            worst_margin = worst_margin.min(report.worst_margin);
        }
        // root residuals of the bracket solver
        let mut worst_residual = 0.0f64;
        for c0 in [1.0, 1.0 + 1e-8, 1.5, 2.0, 3.0, 5.0, 10.0, 50.0] {
            let b = jensen_bounds(c0)?;
            worst_residual = worst_residual
                .max((b.alpha1 - b.alpha1.ln() - c0).abs())
                .max((b.alpha2 - b.alpha2.ln() - c0).abs());
        }
        pass &= worst_residual < 1e-12;
        results.push(CriterionResult::new(
            "8-jensen-bracket",
            pass,
            format!(
                "worst bracket margin {worst_margin:.4} (>= 0) across presets; worst root residual {worst_residual:.2e} (< 1e-12)"
            ),
        ));
    }

    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for name in SUITE_NAMES {
            assert_eq!(Suite::from_name(name).unwrap().name(), *name);
        }
        assert!(matches!(
            Suite::from_name("nope"),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn parallel_runner_keeps_order() {
        let jobs: Vec<_> = (0..16)
            .map(|i| move || i * 2)
            .collect();
        let out = run_parallel(jobs);
        assert_eq!(out, (0..16).map(|i| i * 2).collect::<Vec<_>>());
    }

    #[test]
    fn observed_order_of_synthetic_ladder() {
        let dxs = [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0];
        let errs: Vec<f64> = dxs.iter().map(|d| 3.0 * d * d).collect();
        assert!((observed_order(&dxs, &errs) - 2.0).abs() < 1e-12);
    }
}
