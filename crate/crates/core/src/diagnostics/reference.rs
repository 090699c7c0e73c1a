//! The oscillating-piston problem and its reflection-free reference runs.

use std::f64::consts::PI;

use crate::boundary::{LeftBoundary, PistonSpec};
use crate::equations::{EquationSystem, SystemKind};
use crate::error::{Error, Result};
use crate::grid::{FieldGrid, Grid1D};
use crate::riemann::Reconstruction;
use crate::simulation::{Abc, Simulation};
use crate::timestepping::{max_wave_speed, StepController};

use super::metrics::Trajectory;

/// Trailing cells of a reference run must stay this close to the far field.
pub const TRAILING_TOLERANCE: f64 = 1e-10;
const TRAILING_CELLS: usize = 4;
const EXTENSION_SAFETY: f64 = 1.2;
const RETRY_GROWTH: f64 = 1.5;
const MAX_ATTEMPTS: usize = 4;

/// Piston-driven gas on `[0, x_s]`, observed at a fixed cadence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PistonProblem {
    pub kind: SystemKind,
    pub gamma: f64,
    pub amplitude: f64,
    pub cells_per_wavelength: usize,
    pub wavelength: f64,
    pub x_start: f64,
    pub t_final: f64,
    pub cadence: f64,
    pub courant: f64,
    pub reconstruction: Reconstruction,
}

impl PistonProblem {
    pub fn new(kind: SystemKind, cells_per_wavelength: usize) -> Self {
        Self {
            kind,
            gamma: 1.4,
            amplitude: 0.4,
            cells_per_wavelength,
            wavelength: 2.0 * PI,
            x_start: 20.0 * PI,
            t_final: 40.0 * PI,
            cadence: PI / 5.0,
            courant: 0.8,
            reconstruction: Reconstruction::Minmod,
        }
    }

    pub fn equations(&self) -> Result<EquationSystem<f64>> {
        EquationSystem::new(self.kind, self.gamma)
    }

    pub fn dx(&self) -> f64 {
        self.wavelength / self.cells_per_wavelength as f64
    }

    pub fn controller(&self) -> Result<StepController<f64>> {
        StepController::with_cadence(self.courant, self.t_final, self.cadence)
    }

    pub fn piston(&self) -> Result<LeftBoundary<f64>> {
        Ok(LeftBoundary::Piston(PistonSpec::new(self.amplitude)?))
    }

    /// Largest wave speed expected in the run: the sound speed for the
    /// linearized system; for the nonlinear one the isentropic simple-wave
    /// speed `ρ₀c₀ (c/c₀)^((γ+1)/(γ-1))` at `c = c₀ + (γ-1)M/2`.
    pub fn speed_bound(&self) -> Result<f64> {
        let eq = self.equations()?;
        let g = self.gamma;
        let lambda0 = eq.max_speed(&eq.far_field)?;
        Ok(match self.kind {
            SystemKind::LinearizedLagrangian => lambda0,
            SystemKind::NonlinearLagrangian => {
                let q = eq.far_field;
                let c0 = (g * eq.pressure(&q)? * q.volume()).sqrt();
                lambda0 * ((c0 + 0.5 * (g - 1.0) * self.amplitude) / c0).powf((g + 1.0) / (g - 1.0))
            }
        })
    }
}

/// Reference trajectory on `[0, x_s]` plus the extended domain that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub trajectory: Trajectory,
    pub total_cells: usize,
    pub max_speed: f64,
}

/// Velocity of the first `cells` interior cells.
pub fn velocity_snapshot(field: &FieldGrid<f64>, cells: usize) -> Vec<f64> {
    field.interior()[..cells].iter().map(|q| q.velocity()).collect()
}

fn attempt(problem: &PistonProblem, extension: f64) -> Result<Reference> {
    let eq = problem.equations()?;
    let dx = problem.dx();
    let comp_cells = (problem.x_start / dx).round() as usize;
    let total = ((problem.x_start + extension) / dx).ceil() as usize;
    let grid = Grid1D::new(total, dx)?;
    let field = FieldGrid::uniform(grid, eq.far_field);
    let mut sim =
        Simulation::new(eq, field, problem.piston()?, None, Abc::none())?.with_reconstruction(problem.reconstruction);
    let mut ctl = problem.controller()?;
    let mut trajectory = Trajectory::new(dx);
    let mut max_speed: f64 = 0.0;
    let mut deviation: f64 = 0.0;
    sim.run(&mut ctl, |f| {
        trajectory.push(f.time, velocity_snapshot(f, comp_cells));
        max_speed = max_speed.max(max_wave_speed(f, &eq)?);
        for q in &f.interior()[total - TRAILING_CELLS..] {
            deviation = deviation.max((*q - eq.far_field).max_abs());
        }
        Ok(())
    })?;
    // the extension must also cover the speeds actually observed
    if deviation > TRAILING_TOLERANCE || EXTENSION_SAFETY * max_speed * problem.t_final > extension {
        return Err(Error::DomainTooSmall { deviation });
    }
    Ok(Reference {
        trajectory,
        total_cells: total,
        max_speed,
    })
}

/// Run without any absorbing treatment on a domain long enough that no
/// signal reaches its right end, growing the domain if that fails.
pub fn reference_solution(problem: &PistonProblem) -> Result<Reference> {
    let mut extension = EXTENSION_SAFETY * problem.speed_bound()? * problem.t_final;
    let mut last = Error::DomainTooSmall { deviation: f64::NAN };
    for _ in 0..MAX_ATTEMPTS {
        match attempt(problem, extension) {
            Err(e @ Error::DomainTooSmall { .. }) => {
                last = e;
                extension *= RETRY_GROWTH;
            }
            other => return other,
        }
    }
    Err(last)
}
