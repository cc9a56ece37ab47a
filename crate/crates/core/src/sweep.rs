//! Sweep output table and the parallel grid engine.

use rayon::prelude::*;

use crate::error::Result;

/// Per-grid-point record of <Jz> and <Jz^2>; the output unit of every sweep.
#[derive(Debug, Clone)]
pub struct SpectrumTable {
    pub x_label: &'static str,
    pub xs: Vec<f64>,
    pub jz: Vec<f64>,
    pub jz2: Vec<f64>,
}

impl SpectrumTable {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Index of the grid point closest to x.
    pub fn nearest_index(&self, x: f64) -> usize {
        let mut best = 0;
        for (i, &xi) in self.xs.iter().enumerate() {
            if (xi - x).abs() < (self.xs[best] - x).abs() {
                best = i;
            }
        }
        best
    }

    /// Grid spacing (assumes a uniform grid).
    pub fn spacing(&self) -> f64 {
        if self.xs.len() < 2 {
            return 0.0;
        }
        (self.xs[self.xs.len() - 1] - self.xs[0]) / (self.xs.len() - 1) as f64
    }
}

/// Evaluate `f` over the grid in parallel, collecting (jz, jz2) in grid
/// order; the ordered collection keeps results identical for any worker
/// count.
pub fn map_grid<F>(x_label: &'static str, xs: &[f64], f: F) -> Result<SpectrumTable>
where
    F: Fn(f64) -> Result<(f64, f64)> + Sync,
{
    let rows: Result<Vec<(f64, f64)>> = xs.par_iter().map(|&x| f(x)).collect();
    let rows = rows?;
    Ok(SpectrumTable {
        x_label,
        xs: xs.to_vec(),
        jz: rows.iter().map(|r| r.0).collect(),
        jz2: rows.iter().map(|r| r.1).collect(),
    })
}

/// Uniform grid of `points` values centered on `center` spanning `span`.
pub fn centered_grid(center: f64, span: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![center];
    }
    let half = span / 2.0;
    (0..points)
        .map(|i| center - half + span * i as f64 / (points - 1) as f64)
        .collect()
}
