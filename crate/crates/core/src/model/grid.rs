use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform grid over the unit mass interval.
///
/// Velocity lives on the `n_cells + 1` nodes `i / n`; specific volume and
/// temperature live on the cell centers `(i + 1/2) / n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MassGrid {
    n_cells: usize,
}

impl MassGrid {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::InvalidArgument(
                "grid needs at least one cell".into(),
            ));
        }
        Ok(MassGrid { n_cells })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    /// Cell width `1 / n_cells`.
    pub fn dx(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    /// Node coordinate `i / n_cells`; the last node is exactly 1.
    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i <= self.n_cells);
        i as f64 / self.n_cells as f64
    }

    /// Cell-center coordinate `(2 j + 1) / (2 n_cells)`.
    pub fn cell_center(&self, j: usize) -> f64 {
        debug_assert!(j < self.n_cells);
        (2 * j + 1) as f64 / (2 * self.n_cells) as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_nodes()).map(move |i| self.node(i))
    }

    pub fn cell_centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_cells).map(move |j| self.cell_center(j))
    }
}
