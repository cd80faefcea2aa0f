use std::path::Path;

use crate::diagnostics::jensen_bounds;
use crate::{Error, Result};

use super::pipeline::CsvTable;

/// Render a human-readable verification report for a completed run
/// directory (`config.toml`, `summary.json`, `series.csv`).
pub fn render_report(dir: &Path) -> Result<String> {
    let mut missing = Vec::new();
    for name in ["config.toml", "summary.json", "series.csv"] {
        if !dir.join(name).is_file() {
            missing.push(name.to_string());
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingArtifacts(missing));
    }

    let summary_text = std::fs::read_to_string(dir.join("summary.json"))
        .map_err(|e| Error::io(dir.join("summary.json").display().to_string(), e))?;
    let summary: serde_json::Value = serde_json::from_str(&summary_text)
        .map_err(|e| Error::Schema(format!("summary.json: {e}")))?;
    let csv_text = std::fs::read_to_string(dir.join("series.csv"))
        .map_err(|e| Error::io(dir.join("series.csv").display().to_string(), e))?;
    let table = CsvTable::parse(&csv_text)?;

    let get = |key: &str| summary.get(key).and_then(|v| v.as_f64());
    let mut out = String::new();
    let push = |out: &mut String, line: String| {
        out.push_str(&line);
        out.push('\n');
    };

    push(&mut out, format!("run directory: {}", dir.display()));
    push(
        &mut out,
        format!(
            "status: {}",
            summary.get("status").and_then(|v| v.as_str()).unwrap_or("?")
        ),
    );
    if let Some(t) = get("final_time") {
        push(&mut out, format!("final time: {t}"));
    }
    push(&mut out, String::new());

    // observed bounds against the mean-temperature bracket
    let entropy = table.column("entropy_functional")?;
    let theta_mean = table.column("theta_mean")?;
    let c0 = entropy.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    push(&mut out, "bounds".to_string());
    if let (Some(lo_v), Some(hi_v)) = (get("global_min_v"), get("final_max_v")) {
        push(&mut out, format!("  v range observed: [{lo_v:.6}, {hi_v:.6}]"));
    }
    if let (Some(lo), Some(hi)) = (get("global_min_theta"), get("final_max_theta")) {
        push(&mut out, format!("  theta range observed: [{lo:.6}, {hi:.6}]"));
    }
    match jensen_bounds(c0) {
        Ok(b) => {
            let th_lo = theta_mean.iter().copied().fold(f64::INFINITY, f64::min);
            let th_hi = theta_mean.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            push(
                &mut out,
                format!(
                    "  mean-temperature bracket [alpha1, alpha2] = [{:.6}, {:.6}] at C0 = {c0:.6}",
                    b.alpha1, b.alpha2
                ),
            );
            push(
                &mut out,
                format!(
                    "  theta_mean stayed in [{th_lo:.6}, {th_hi:.6}] -> margin {:.6}",
                    get("jensen_margin").unwrap_or(f64::NAN)
                ),
            );
        }
        Err(e) => push(&mut out, format!("  bracket unavailable: {e}")),
    }
    push(&mut out, String::new());

    push(&mut out, "stationary state".to_string());
    if let (Some(v_hat), Some(theta_hat)) = (get("v_hat"), get("theta_hat")) {
        let v_mean = table.column("v_mean")?;
        let th_mean_last = *theta_mean.last().unwrap();
        let v_mean_last = *v_mean.last().unwrap();
        let unc = get("stationary_uncertainty").unwrap_or(f64::NAN);
        push(
            &mut out,
            format!("  predicted: v_hat = {v_hat:.10}, theta_hat = {theta_hat:.10} (+/- {unc:.3e})"),
        );
        push(
            &mut out,
            format!(
                "  late-time means: v = {v_mean_last:.10} (gap {:.3e}), theta = {th_mean_last:.10} (gap {:.3e})",
                (v_mean_last - v_hat).abs(),
                (th_mean_last - theta_hat).abs()
            ),
        );
        push(
            &mut out,
            format!(
                "  final H1 distances: v {:.3e}, u {:.3e}, theta {:.3e}",
                get("final_h1_v").unwrap_or(f64::NAN),
                get("final_h1_u").unwrap_or(f64::NAN),
                get("final_h1_theta").unwrap_or(f64::NAN)
            ),
        );
    }
    push(&mut out, String::new());

    push(&mut out, "decay rates (log-linear fits)".to_string());
    for (label, lam_key, r2_key) in [
        ("h1_u        ", "lambda_h1_u", "r2_h1_u"),
        ("int_ux2     ", "lambda_int_ux2", "r2_int_ux2"),
        ("int_thetax2 ", "lambda_int_thetax2", "r2_int_thetax2"),
    ] {
        match (get(lam_key), get(r2_key)) {
            (Some(l), Some(r2)) => push(
                &mut out,
                format!("  {label} lambda = {l:.6}  r2 = {r2:.6}"),
            ),
            _ => push(&mut out, format!("  {label} (at fit floor)")),
        }
    }
    push(&mut out, String::new());

    let y = table.column("Y")?;
    let f = table.column("F")?;
    push(
        &mut out,
        format!(
            "envelopes: Y and F columns cover {} samples; final Y = {:.6e}, final F = {:.6e}",
            y.len(),
            y.last().unwrap(),
            f.last().unwrap()
        ),
    );
    if let Some(p) = get("peak_energy_residual") {
        push(&mut out, format!("peak energy residual: {p:.3e}"));
    }
    if let Some(d) = get("momentum_drift_max") {
        push(&mut out, format!("max momentum drift: {d:.3e}"));
    }
    Ok(out)
}
