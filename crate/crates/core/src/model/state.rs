use crate::{Error, Result};

/// Discrete fields on the staggered mass grid at one instant.
///
/// `v` and `theta` are cell-centered (length `n`), `u` is node-centered
/// (length `n + 1`). Positivity of `v` and `theta` is part of the type's
/// contract; the checked constructor enforces it.
#[derive(Debug, Clone, PartialEq)]
pub struct FluidState {
    v: Vec<f64>,
    u: Vec<f64>,
    theta: Vec<f64>,
    t: f64,
}

impl FluidState {
    pub fn new(v: Vec<f64>, u: Vec<f64>, theta: Vec<f64>, t: f64) -> Result<Self> {
        if v.is_empty() || theta.len() != v.len() || u.len() != v.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "field lengths do not match a staggered grid: v = {}, theta = {}, u = {}",
                v.len(),
                theta.len(),
                u.len()
            )));
        }
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument(format!("time must be >= 0, got {t}")));
        }
        for (j, &x) in v.iter().enumerate() {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::InvalidInitialData {
                    field: "v",
                    index: j,
                    value: x,
                });
            }
        }
        for (j, &x) in theta.iter().enumerate() {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::InvalidInitialData {
                    field: "theta",
                    index: j,
                    value: x,
                });
            }
        }
        if let Some(j) = u.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidInitialData {
                field: "u",
                index: j,
                value: u[j],
            });
        }
        Ok(FluidState { v, u, theta, t })
    }

    pub fn n_cells(&self) -> usize {
        self.v.len()
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.v.len() as f64
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub(crate) fn set_time(&mut self, t: f64) {
        self.t = t;
    }

    pub(crate) fn fields_mut(&mut self) -> (&mut [f64], &mut [f64], &mut [f64]) {
        (&mut self.v, &mut self.u, &mut self.theta)
    }

    pub fn min_v(&self) -> f64 {
        self.v.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_v(&self) -> f64 {
        self.v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_theta(&self) -> f64 {
        self.theta.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_theta(&self) -> f64 {
        self.theta.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest absolute entry-wise difference across all three fields.
    pub fn max_norm_distance(&self, other: &FluidState) -> f64 {
        let mut d = 0.0f64;
        for (a, b) in self.v.iter().zip(&other.v) {
            d = d.max((a - b).abs());
        }
        for (a, b) in self.u.iter().zip(&other.u) {
            d = d.max((a - b).abs());
        }
        for (a, b) in self.theta.iter().zip(&other.theta) {
            d = d.max((a - b).abs());
        }
        d
    }
}
