use crate::model::OuterPressure;
use crate::Result;

/// `Y(t) = exp(int_0^t p)`, the exponential weight in the decay envelopes.
/// Evaluated from the schedule's exact integral; overflows only past
/// `t * p_bar ~ 700`, far beyond desk horizons.
pub fn y_of_t(schedule: &dyn OuterPressure, t: f64) -> Result<f64> {
    Ok(schedule.integral(t)?.exp())
}

/// Forcing envelope
/// `F(t) = Y^-2 + (Y^-1 int_0^t Y (p_bar - p))^2 + int_t^inf |p'|`,
/// computed in log space so the weight never overflows. The middle integral
/// uses adaptive Simpson quadrature to ~1e-12.
pub fn f_of_t(schedule: &dyn OuterPressure, t: f64, p_bar: f64) -> Result<f64> {
    let l_t = schedule.integral(t)?;
    let first = (-2.0 * l_t).exp();
    let middle = if t == 0.0 {
        0.0
    } else {
        let f = |tau: f64| -> Result<f64> {
            let (p, _) = schedule.eval(tau)?;
            let l_tau = schedule.integral(tau)?;
            Ok((l_tau - l_t).exp() * (p_bar - p))
        };
        adaptive_simpson(&f, 0.0, t, 1e-12, 40)?
    };
    let tail = schedule.tail_variation(t)?;
    Ok(first + middle * middle + tail)
}

fn adaptive_simpson(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64> {
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        Ok(left + right + delta / 15.0)
    } else {
        let l = simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
        let r = simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
        Ok(l + r)
    }
}

/// Incremental evaluation of `Y` and `F` along a run at the sampling stride.
///
/// The middle term is carried as the already-normalized quantity
/// `M(t) = Y(t)^-1 int_0^t Y (p_bar - p)`, which obeys the stable recurrence
/// `M_k = e^{-dL} M_{k-1} + trapezoid` with all exponents nonpositive.
#[derive(Debug, Clone)]
pub struct EnvelopeTracker {
    p_bar: f64,
    prev_t: f64,
    prev_log_y: f64,
    prev_gap: f64,
    middle: f64,
}

impl EnvelopeTracker {
    pub fn new(schedule: &dyn OuterPressure) -> Result<Self> {
        let (p0, _) = schedule.eval(0.0)?;
        let p_bar = schedule.limit_pressure();
        Ok(EnvelopeTracker {
            p_bar,
            prev_t: 0.0,
            prev_log_y: 0.0,
            prev_gap: p_bar - p0,
            middle: 0.0,
        })
    }

    /// Advance to sample time `t` (not before the previous sample) and
    /// return `(Y(t), F(t))`.
    pub fn advance(&mut self, schedule: &dyn OuterPressure, t: f64) -> Result<(f64, f64)> {
        let log_y = schedule.integral(t)?;
        let (p, _) = schedule.eval(t)?;
        let gap = self.p_bar - p;
        if t > self.prev_t {
            let decay = (self.prev_log_y - log_y).exp();
            let dt = t - self.prev_t;
            self.middle = decay * self.middle + 0.5 * dt * (decay * self.prev_gap + gap);
        }
        self.prev_t = t;
        self.prev_log_y = log_y;
        self.prev_gap = gap;
        let f = (-2.0 * log_y).exp() + self.middle * self.middle + schedule.tail_variation(t)?;
        Ok(((log_y).exp(), f))
    }
}
