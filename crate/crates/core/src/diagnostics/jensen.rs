use crate::{Error, Result};

use super::sample::DiagnosticsSample;

/// The two roots of `x - ln x = c0` bracketing the mean temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JensenBounds {
    pub c0: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

fn residual(x: f64, c0: f64) -> f64 {
    x - x.ln() - c0
}

/// Bisect `x - ln x = c0` on a bracket where the function changes sign.
fn bisect(mut lo: f64, mut hi: f64, c0: f64) -> f64 {
    let mut f_lo = residual(lo, c0);
    debug_assert!(f_lo * residual(hi, c0) <= 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = residual(mid, c0);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid * f_lo > 0.0 {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Roots of `x - ln x = c0`; requires `c0 >= 1` (double root at 1).
pub fn jensen_bounds(c0: f64) -> Result<JensenBounds> {
    if !(c0 >= 1.0) || !c0.is_finite() {
        return Err(Error::JensenDomain { c0 });
    }
    if c0 == 1.0 {
        return Ok(JensenBounds {
            c0,
            alpha1: 1.0,
            alpha2: 1.0,
        });
    }
    // Lower root: f(e^{-c0-1}) = e^{-c0-1} + 1 > 0 and f(1) = 1 - c0 < 0.
    let alpha1 = bisect((-c0 - 1.0).exp(), 1.0, c0);
    // Upper root: expand until the residual turns positive.
    let mut hi = 2.0;
    while residual(hi, c0) <= 0.0 {
        hi *= 2.0;
    }
    let alpha2 = bisect(1.0, hi, c0);
    Ok(JensenBounds { c0, alpha1, alpha2 })
}

/// Outcome of bracketing the mean temperature along a series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JensenReport {
    pub pass: bool,
    /// Smallest of `min(theta_mean - alpha1, alpha2 - theta_mean)` over the
    /// series; negative when the bracket was violated.
    pub worst_margin: f64,
    pub worst_t: f64,
    /// Final running maximum of the entropy functional.
    pub c0_final: f64,
    pub bounds_final: (f64, f64),
}

/// Check `theta_mean(t) in [alpha1, alpha2]` with `c0` taken as the running
/// maximum of the entropy functional up to each sample, which makes the
/// bracket an unconditional consequence of convexity.
pub fn jensen_check(samples: &[DiagnosticsSample]) -> Result<JensenReport> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty diagnostics series".into()));
    }
    let mut c0_running = f64::NEG_INFINITY;
    let mut bounds = JensenBounds {
        c0: 1.0,
        alpha1: 1.0,
        alpha2: 1.0,
    };
    let mut worst_margin = f64::INFINITY;
    let mut worst_t = samples[0].t;
    for s in samples {
        if s.entropy_functional > c0_running {
            c0_running = s.entropy_functional;
            bounds = jensen_bounds(c0_running)?;
        }
        let margin = (s.theta_mean - bounds.alpha1).min(bounds.alpha2 - s.theta_mean);
        if margin < worst_margin {
            worst_margin = margin;
            worst_t = s.t;
        }
    }
    Ok(JensenReport {
        pass: worst_margin >= 0.0,
        worst_margin,
        worst_t,
        c0_final: c0_running,
        bounds_final: (bounds.alpha1, bounds.alpha2),
    })
}
