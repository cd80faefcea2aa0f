use serde::Serialize;

use crate::{Error, Result};

/// Values below this are treated as roundoff-dominated and excluded from
/// decay fits.
pub const FIT_FLOOR: f64 = 1e-14;

/// Gradient-based norms bottom out at a noise plateau proportional to their
/// peak rather than at an absolute level; values this far below the series
/// maximum are excluded along with the absolute floor.
pub const FIT_FLOOR_RELATIVE: f64 = 1e-10;

const MIN_POINTS: usize = 8;

/// Least-squares exponential decay rate of a positive series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    /// Decay rate: `y ~ exp(-lambda t)`.
    pub lambda: f64,
    /// Goodness of the log-linear fit; defined as 1 for a zero-variance fit.
    pub r_squared: f64,
    /// Time window the fit used.
    pub window: (f64, f64),
}

/// How to pick the fitting window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowPolicy {
    /// Latter half (by count) of the samples above the floor.
    Default,
    /// All samples above the floor with `t >= t_start`.
    FromTime(f64),
    /// All samples above the floor with `t_start <= t <= t_end`.
    Window(f64, f64),
}

/// Fit `ln y` against `t` by least squares over the selected window.
pub fn fit_decay_rate(ts: &[f64], ys: &[f64], policy: WindowPolicy) -> Result<DecayFit> {
    if ts.len() != ys.len() {
        return Err(Error::InvalidArgument(format!(
            "series lengths differ: {} times vs {} values",
            ts.len(),
            ys.len()
        )));
    }
    let peak = ys.iter().copied().fold(0.0f64, f64::max);
    let floor = FIT_FLOOR.max(FIT_FLOOR_RELATIVE * peak);
    let mut pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(ys)
        .filter(|(_, &y)| y > floor)
        .map(|(&t, &y)| (t, y.ln()))
        .collect();
    pts = match policy {
        WindowPolicy::Default => pts.split_off(pts.len() / 2),
        WindowPolicy::FromTime(t0) => pts.into_iter().filter(|&(t, _)| t >= t0).collect(),
        WindowPolicy::Window(t0, t1) => pts
            .into_iter()
            .filter(|&(t, _)| t >= t0 && t <= t1)
            .collect(),
    };
    if pts.len() < MIN_POINTS {
        return Err(Error::InsufficientData {
            needed: MIN_POINTS,
            found: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_l = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut s_tt = 0.0;
    let mut s_tl = 0.0;
    let mut s_ll = 0.0;
    for &(t, l) in &pts {
        s_tt += (t - mean_t) * (t - mean_t);
        s_tl += (t - mean_t) * (l - mean_l);
        s_ll += (l - mean_l) * (l - mean_l);
    }
    if s_tt == 0.0 {
        return Err(Error::InsufficientData {
            needed: MIN_POINTS,
            found: 1,
        });
    }
    let slope = s_tl / s_tt;
    let ss_res = (s_ll - slope * s_tl).max(0.0);
    let r_squared = if s_ll <= 1e-30 {
        1.0
    } else {
        1.0 - ss_res / s_ll
    };
    Ok(DecayFit {
        lambda: -slope,
        r_squared,
        window: (pts[0].0, pts[pts.len() - 1].0),
    })
}
