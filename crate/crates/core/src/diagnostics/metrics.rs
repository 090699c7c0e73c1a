//! Relative L¹ errors between velocity trajectories on the computational
//! domain.

use crate::error::{Error, Result};
use crate::grid::restrict_values;

/// Output times whose reference norm is below `NORM_FLOOR · x_s` are skipped.
pub const NORM_FLOOR: f64 = 1e-8;

/// Velocity snapshots on the cells of `[0, x_s]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub dx: f64,
    pub times: Vec<f64>,
    pub velocity: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn new(dx: f64) -> Self {
        Self { dx, ..Self::default() }
    }

    pub fn push(&mut self, time: f64, velocity: Vec<f64>) {
        self.times.push(time);
        self.velocity.push(velocity);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn cells(&self) -> usize {
        self.velocity.first().map_or(0, Vec::len)
    }

    pub fn domain_length(&self) -> f64 {
        self.dx * self.cells() as f64
    }

    /// Cell-average restriction of every snapshot by `ratio`.
    pub fn restrict(&self, ratio: usize) -> Result<Trajectory> {
        Ok(Trajectory {
            dx: self.dx * ratio as f64,
            times: self.times.clone(),
            velocity: self
                .velocity
                .iter()
                .map(|v| restrict_values(v, ratio))
                .collect::<Result<_>>()?,
        })
    }
}

pub fn l1_norm(values: &[f64], dx: f64) -> f64 {
    dx * values.iter().map(|v| v.abs()).sum::<f64>()
}

/// Relative error at every output time; `None` where the reference norm is
/// below the floor.
pub fn error_series(reference: &Trajectory, test: &Trajectory) -> Result<Vec<Option<f64>>> {
    if reference.times.len() != test.times.len()
        || reference.cells() != test.cells()
        || (reference.dx - test.dx).abs() > 1e-12 * reference.dx
    {
        return Err(Error::GridMismatch(format!(
            "reference has {} snapshots of {} cells (dx {}), test has {} of {} (dx {})",
            reference.len(),
            reference.cells(),
            reference.dx,
            test.len(),
            test.cells(),
            test.dx
        )));
    }
    let floor = NORM_FLOOR * reference.domain_length();
    reference
        .times
        .iter()
        .zip(&test.times)
        .zip(reference.velocity.iter().zip(&test.velocity))
        .map(|((tr, tt), (ur, ut))| {
            if (tr - tt).abs() > 1e-9 * tr.abs().max(1.0) {
                return Err(Error::GridMismatch(format!("output times {tr} and {tt} differ")));
            }
            let norm = l1_norm(ur, reference.dx);
            if norm < floor {
                return Ok(None);
            }
            let diff: f64 = ur.iter().zip(ut).map(|(a, b)| (a - b).abs()).sum();
            Ok(Some(reference.dx * diff / norm))
        })
        .collect()
}

/// `max_t ‖u_ref − u‖₁ / ‖u_ref‖₁`; zero when no output time passes the floor.
pub fn error_abc(reference: &Trajectory, test: &Trajectory) -> Result<f64> {
    Ok(error_series(reference, test)?.into_iter().flatten().fold(0.0, f64::max))
}

/// Discretization error of a coarse reference measured against a fine one
/// restricted onto the coarse cells.
pub fn error_num(coarse: &Trajectory, fine: &Trajectory) -> Result<f64> {
    let ratio = (coarse.dx / fine.dx).round();
    if ratio < 1.0 || (ratio * fine.dx - coarse.dx).abs() > 1e-9 * coarse.dx {
        return Err(Error::GridMismatch(format!(
            "fine spacing {} does not divide coarse spacing {}",
            fine.dx, coarse.dx
        )));
    }
    error_abc(&fine.restrict(ratio as usize)?, coarse)
}
