//! Entropy function integrated over the sponge layer.

use crate::equations::entropy;
use crate::error::Result;
use crate::grid::FieldGrid;

/// `Δx Σ s(Q_i)` over the cells whose centre lies in `[x_s, ∞)`.
pub fn sponge_entropy(field: &FieldGrid<f64>, gamma: f64, x_start: f64) -> Result<f64> {
    let grid = field.grid;
    let mut total = 0.0;
    for (i, q) in field.interior().iter().enumerate() {
        if grid.center(i) >= x_start {
            total += entropy(q, gamma)?;
        }
    }
    Ok(total * grid.dx)
}

/// Differences between consecutive samples.
pub fn increments(series: &[f64]) -> Vec<f64> {
    series.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Largest single increase of a series (zero if it never increases).
pub fn max_increment(series: &[f64]) -> f64 {
    increments(series).into_iter().fold(0.0, f64::max)
}
