use crate::{Error, Result};

/// Boundary pressure forcing as seen by the solver and the diagnostics.
///
/// Implementations must be continuously differentiable with `p(t) > 0` on
/// their domain. Besides the built-in [`PressureSchedule`] kinds, the
/// analytic oracles implement this trait for their induced boundary
/// pressures.
pub trait OuterPressure {
    /// `(p(t), p'(t))`.
    fn eval(&self, t: f64) -> Result<(f64, f64)>;

    /// Exact cumulative integral of `p` from 0 to `t`.
    fn integral(&self, t: f64) -> Result<f64>;

    /// Limit of `p(t)` as `t -> inf` (plateau value for tabulated data).
    fn limit_pressure(&self) -> f64;

    /// Remaining total variation of `p` past `t`.
    fn tail_variation(&self, t: f64) -> Result<f64>;
}

/// The boundary pressure schedules the harness can be configured with.
///
/// Every kind is C^1 on `t >= 0` and strictly positive. Tabulated data is
/// interpolated with a monotone cubic so the derivative exists everywhere and
/// the interpolant cannot overshoot the samples.
#[derive(Debug, Clone)]
pub enum PressureSchedule {
    Constant {
        p_bar: f64,
    },
    /// `p(t) = p_bar + (p0 - p_bar) * exp(-rate * t)`.
    Exponential {
        p0: f64,
        p_bar: f64,
        rate: f64,
    },
    /// C^1 polynomial blend from `p0` to `p1` over `[t0, t1]`.
    Smoothstep {
        p0: f64,
        p1: f64,
        t0: f64,
        t1: f64,
    },
    Tabulated(MonotoneCubic),
}

/// Summary statistics of a schedule over a queried horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleStats {
    /// Infimum of `p` over the horizon.
    pub p_min: f64,
    /// Supremum of `p` over the horizon.
    pub p_max: f64,
    /// Total variation of `p` over the horizon.
    pub total_variation: f64,
    /// Limit pressure; the plateau value when no analytic limit exists.
    pub p_bar: f64,
    /// Whether `p_bar` is an exact limit rather than a last-sample estimate.
    pub p_bar_exact: bool,
    pub horizon: f64,
}

fn require_positive(field: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSchedule(format!(
            "{field} must be positive and finite, got {value}"
        )))
    }
}

fn require_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "schedule time must be finite and >= 0, got {t}"
        )))
    }
}

impl PressureSchedule {
    pub fn constant(p_bar: f64) -> Result<Self> {
        require_positive("p_bar", p_bar)?;
        Ok(PressureSchedule::Constant { p_bar })
    }

    pub fn exponential(p0: f64, p_bar: f64, rate: f64) -> Result<Self> {
        require_positive("p0", p0)?;
        require_positive("p_bar", p_bar)?;
        require_positive("rate", rate)?;
        Ok(PressureSchedule::Exponential { p0, p_bar, rate })
    }

    pub fn smoothstep(p0: f64, p1: f64, t0: f64, t1: f64) -> Result<Self> {
        require_positive("p0", p0)?;
        require_positive("p1", p1)?;
        if !(t0 >= 0.0 && t1 > t0) {
            return Err(Error::InvalidSchedule(format!(
                "smoothstep needs 0 <= t0 < t1, got t0 = {t0}, t1 = {t1}"
            )));
        }
        Ok(PressureSchedule::Smoothstep { p0, p1, t0, t1 })
    }

    pub fn tabulated(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(PressureSchedule::Tabulated(MonotoneCubic::new(
            times, values,
        )?))
    }

    /// `(p(t), p'(t))`; tabulated kinds reject times outside the knot range.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        require_time(t)?;
        match self {
            PressureSchedule::Constant { p_bar } => Ok((*p_bar, 0.0)),
            PressureSchedule::Exponential { p0, p_bar, rate } => {
                let e = (-rate * t).exp();
                Ok((p_bar + (p0 - p_bar) * e, -rate * (p0 - p_bar) * e))
            }
            PressureSchedule::Smoothstep { p0, p1, t0, t1 } => {
                if t <= *t0 {
                    Ok((*p0, 0.0))
                } else if t >= *t1 {
                    Ok((*p1, 0.0))
                } else {
                    let w = t1 - t0;
                    let s = (t - t0) / w;
                    let blend = s * s * (3.0 - 2.0 * s);
                    let p = p0 + (p1 - p0) * blend;
                    let dp = (p1 - p0) * 6.0 * s * (1.0 - s) / w;
                    Ok((p, dp))
                }
            }
            PressureSchedule::Tabulated(c) => c.eval(t),
        }
    }

    /// Exact `int_0^t p`; piecewise-analytic for every kind.
    pub fn integral(&self, t: f64) -> Result<f64> {
        require_time(t)?;
        match self {
            PressureSchedule::Constant { p_bar } => Ok(p_bar * t),
            PressureSchedule::Exponential { p0, p_bar, rate } => {
                Ok(p_bar * t + (p0 - p_bar) * (1.0 - (-rate * t).exp()) / rate)
            }
            PressureSchedule::Smoothstep { p0, p1, t0, t1 } => {
                let mut acc = p0 * t.min(*t0);
                if t > *t0 {
                    let w = t1 - t0;
                    let s = ((t - t0) / w).min(1.0);
                    // int_0^s 3x^2 - 2x^3 dx = s^3 - s^4 / 2
                    acc += w * (p0 * s + (p1 - p0) * (s.powi(3) - 0.5 * s.powi(4)));
                }
                if t > *t1 {
                    acc += p1 * (t - t1);
                }
                Ok(acc)
            }
            PressureSchedule::Tabulated(c) => c.integral(t),
        }
    }

    /// Limit value of the schedule (plateau estimate for tabulated data).
    pub fn limit_pressure(&self) -> f64 {
        match self {
            PressureSchedule::Constant { p_bar } => *p_bar,
            PressureSchedule::Exponential { p_bar, .. } => *p_bar,
            PressureSchedule::Smoothstep { p1, .. } => *p1,
            PressureSchedule::Tabulated(c) => *c.values.last().unwrap(),
        }
    }

    /// Whether [`Self::limit_pressure`] is an exact limit.
    pub fn limit_is_exact(&self) -> bool {
        !matches!(self, PressureSchedule::Tabulated(_))
    }

    /// Remaining `int_t^inf |p'|`; tabulated schedules are treated as flat
    /// past their last knot.
    pub fn tail_variation(&self, t: f64) -> Result<f64> {
        require_time(t)?;
        match self {
            PressureSchedule::Constant { .. } => Ok(0.0),
            PressureSchedule::Exponential { p0, p_bar, rate } => {
                Ok((p0 - p_bar).abs() * (-rate * t).exp())
            }
            PressureSchedule::Smoothstep { p0, p1, t0, t1 } => {
                if t <= *t0 {
                    Ok((p1 - p0).abs())
                } else if t >= *t1 {
                    Ok(0.0)
                } else {
                    let (p, _) = self.eval(t)?;
                    Ok((p1 - p).abs())
                }
            }
            PressureSchedule::Tabulated(c) => c.tail_variation(t),
        }
    }

    /// Extrema, total variation and limit of `p` over `[0, horizon]`; the
    /// horizon may be infinite.
    pub fn stats(&self, horizon: f64) -> Result<ScheduleStats> {
        if !(horizon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "stats horizon must be positive, got {horizon}"
            )));
        }
        let (p_min, p_max, total_variation) = match self {
            PressureSchedule::Constant { p_bar } => (*p_bar, *p_bar, 0.0),
            PressureSchedule::Exponential { p0, p_bar, rate } => {
                let p_end = if horizon.is_infinite() {
                    *p_bar
                } else {
                    p_bar + (p0 - p_bar) * (-rate * horizon).exp()
                };
                let tv = if horizon.is_infinite() {
                    (p0 - p_bar).abs()
                } else {
                    (p0 - p_bar).abs() * (1.0 - (-rate * horizon).exp())
                };
                (p0.min(p_end), p0.max(p_end), tv)
            }
            PressureSchedule::Smoothstep { p0, t1, .. } => {
                let p_end = if horizon.is_infinite() {
                    self.limit_pressure()
                } else {
                    self.eval(horizon.min(*t1))?.0
                };
                (p0.min(p_end), p0.max(p_end), (p_end - p0).abs())
            }
            PressureSchedule::Tabulated(c) => c.stats_over(horizon)?,
        };
        if !(p_min > 0.0) {
            return Err(Error::InvalidSchedule(format!(
                "schedule is not positive over the horizon: inf p = {p_min}"
            )));
        }
        Ok(ScheduleStats {
            p_min,
            p_max,
            total_variation,
            p_bar: self.limit_pressure(),
            p_bar_exact: self.limit_is_exact(),
            horizon,
        })
    }
}

impl OuterPressure for PressureSchedule {
    fn eval(&self, t: f64) -> Result<(f64, f64)> {
        PressureSchedule::eval(self, t)
    }

    fn integral(&self, t: f64) -> Result<f64> {
        PressureSchedule::integral(self, t)
    }

    fn limit_pressure(&self) -> f64 {
        PressureSchedule::limit_pressure(self)
    }

    fn tail_variation(&self, t: f64) -> Result<f64> {
        PressureSchedule::tail_variation(self, t)
    }
}

/// Monotonicity-preserving C^1 cubic interpolant (Fritsch-Carlson slopes).
///
/// On every knot interval the interpolant is monotone between its endpoint
/// values, so positivity of the samples implies positivity everywhere and the
/// variation over an interval is exactly the endpoint difference.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    times: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    /// Cumulative integral of the interpolant at each knot.
    knot_integrals: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() || times.len() < 2 {
            return Err(Error::InvalidSchedule(format!(
                "tabulated schedule needs >= 2 samples with matching lengths, got {} times / {} values",
                times.len(),
                values.len()
            )));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidSchedule(format!(
                "tabulated schedule must start at t = 0, got {}",
                times[0]
            )));
        }
        if !times.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidSchedule(
                "tabulated times must be strictly increasing".into(),
            ));
        }
        for (k, &p) in values.iter().enumerate() {
            if !(p > 0.0) || !p.is_finite() {
                return Err(Error::InvalidSchedule(format!(
                    "tabulated pressure sample {k} = {p} is not positive"
                )));
            }
        }
        let slopes = fritsch_carlson_slopes(&times, &values);
        let mut knot_integrals = vec![0.0; times.len()];
        for k in 0..times.len() - 1 {
            let h = times[k + 1] - times[k];
            // Full Hermite segment integral.
            let seg = h * (0.5 * (values[k] + values[k + 1]) + h * (slopes[k] - slopes[k + 1]) / 12.0);
            knot_integrals[k + 1] = knot_integrals[k] + seg;
        }
        Ok(MonotoneCubic {
            times,
            values,
            slopes,
            knot_integrals,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn segment_of(&self, t: f64) -> Result<usize> {
        let t_min = self.times[0];
        let t_max = *self.times.last().unwrap();
        if t < t_min || t > t_max {
            return Err(Error::ScheduleRange { t, t_min, t_max });
        }
        let k = self.times.partition_point(|&x| x <= t);
        Ok(k.clamp(1, self.times.len() - 1) - 1)
    }

    fn eval(&self, t: f64) -> Result<(f64, f64)> {
        let k = self.segment_of(t)?;
        let h = self.times[k + 1] - self.times[k];
        let s = (t - self.times[k]) / h;
        let (p0, p1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (self.slopes[k], self.slopes[k + 1]);
        let h00 = (2.0 * s - 3.0) * s * s + 1.0;
        let h10 = ((s - 2.0) * s + 1.0) * s;
        let h01 = (3.0 - 2.0 * s) * s * s;
        let h11 = (s - 1.0) * s * s;
        let p = p0 * h00 + h * m0 * h10 + p1 * h01 + h * m1 * h11;
        let d00 = 6.0 * s * (s - 1.0);
        let d10 = (3.0 * s - 4.0) * s + 1.0;
        let d01 = 6.0 * s * (1.0 - s);
        let d11 = (3.0 * s - 2.0) * s;
        let dp = (p0 * d00 + h * m0 * d10 + p1 * d01 + h * m1 * d11) / h;
        Ok((p, dp))
    }

    fn integral(&self, t: f64) -> Result<f64> {
        let k = self.segment_of(t)?;
        let h = self.times[k + 1] - self.times[k];
        let s = (t - self.times[k]) / h;
        let (p0, p1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (self.slopes[k], self.slopes[k + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        let s4 = s2 * s2;
        // Antiderivatives of the Hermite basis on [0, s].
        let i00 = 0.5 * s4 - s3 + s;
        let i10 = 0.25 * s4 - (2.0 / 3.0) * s3 + 0.5 * s2;
        let i01 = s3 - 0.5 * s4;
        let i11 = 0.25 * s4 - s3 / 3.0;
        let partial = h * (p0 * i00 + h * m0 * i10 + p1 * i01 + h * m1 * i11);
        Ok(self.knot_integrals[k] + partial)
    }

    fn tail_variation(&self, t: f64) -> Result<f64> {
        let t_max = *self.times.last().unwrap();
        if t >= t_max {
            return Ok(0.0);
        }
        let k = self.segment_of(t)?;
        let (p_at_t, _) = self.eval(t)?;
        // Monotone segments: the variation past t is |p_{k+1} - p(t)| plus
        // the endpoint differences of all later segments.
        let mut acc = (self.values[k + 1] - p_at_t).abs();
        for j in k + 1..self.values.len() - 1 {
            acc += (self.values[j + 1] - self.values[j]).abs();
        }
        Ok(acc)
    }

    fn stats_over(&self, horizon: f64) -> Result<(f64, f64, f64)> {
        let t_max = *self.times.last().unwrap();
        let h_eff = horizon.min(t_max);
        let mut p_min = f64::INFINITY;
        let mut p_max = f64::NEG_INFINITY;
        let mut tv = 0.0;
        let mut prev = self.values[0];
        for (k, &tk) in self.times.iter().enumerate() {
            if tk > h_eff {
                break;
            }
            p_min = p_min.min(self.values[k]);
            p_max = p_max.max(self.values[k]);
            if k > 0 {
                tv += (self.values[k] - prev).abs();
            }
            prev = self.values[k];
        }
        if h_eff < t_max && h_eff > self.times[0] {
            let (p_h, _) = self.eval(h_eff)?;
            p_min = p_min.min(p_h);
            p_max = p_max.max(p_h);
            if h_eff > *self
                .times
                .iter()
                .filter(|&&tk| tk <= h_eff)
                .last()
                .unwrap()
            {
                tv += (p_h - prev).abs();
            }
        }
        Ok((p_min, p_max, tv))
    }
}

fn fritsch_carlson_slopes(times: &[f64], values: &[f64]) -> Vec<f64> {
    let n = times.len();
    let h: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1)
        .map(|k| (values[k + 1] - values[k]) / h[k])
        .collect();
    if n == 2 {
        return vec![delta[0], delta[0]];
    }
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] <= 0.0 {
            m[k] = 0.0;
        } else {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    m[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    m
}

/// Shape-preserving three-point endpoint slope.
fn endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}
