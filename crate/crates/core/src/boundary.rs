//! Ghost-cell fillers: oscillating piston on the left, far field,
//! extrapolation or a reflecting wall on the right.

use crate::equations::{EquationSystem, VACUUM_FLOOR};
use crate::error::{Error, Result};
use crate::grid::FieldGrid;
use crate::linalg::ConservedState;
use crate::scalar::Real;

/// Plate at `x̃(t) = M (cos t − 1)` moving with `−M sin t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PistonSpec<T> {
    pub amplitude: T,
}

impl<T: Real> PistonSpec<T> {
    pub fn new(amplitude: T) -> Result<Self> {
        if !(amplitude >= T::zero()) || !amplitude.is_finite() {
            return Err(Error::Config(format!("piston amplitude must be >= 0, got {amplitude}")));
        }
        Ok(Self { amplitude })
    }

    pub fn position(&self, t: T) -> T {
        self.amplitude * (t.cos() - T::one())
    }

    pub fn velocity(&self, t: T) -> T {
        -self.amplitude * t.sin()
    }
}

impl Default for PistonSpec<f64> {
    fn default() -> Self {
        Self { amplitude: 0.4 }
    }
}

/// Ghost state left of the piston for the nonlinear system.
pub fn fill_piston_nonlinear<T: Real>(
    q0: &ConservedState<T>,
    t: T,
    dx: T,
    amplitude: T,
    gamma: T,
) -> Result<ConservedState<T>> {
    let eq = EquationSystem::nonlinear(gamma)?;
    let p0 = eq.pressure(q0)?;
    let u = -T::two() * amplitude * t.sin() - q0.velocity();
    let p = p0 - amplitude * t.cos() * dx;
    if !(p > T::lit(VACUUM_FLOOR)) {
        return Err(Error::NonPhysicalState(format!("piston ghost pressure {p} at t = {t}")));
    }
    let delta = (p0 - p) / (p0 + p);
    if !(delta.abs() < gamma) {
        return Err(Error::NonPhysicalState(format!(
            "piston pressure ratio {delta} out of range at t = {t}"
        )));
    }
    let v = q0.volume() * (gamma + delta) / (gamma - delta);
    Ok(ConservedState::new(v, u, eq.energy_from(v, u, p)))
}

/// Ghost state left of the piston for the linearized system.
pub fn fill_piston_linear<T: Real>(
    q0: &ConservedState<T>,
    t: T,
    dx: T,
    amplitude: T,
    gamma: T,
) -> Result<ConservedState<T>> {
    let eq = EquationSystem::linearized(gamma)?;
    let p0 = eq.pressure(q0)?;
    let u = -T::two() * amplitude * t.sin() - q0.velocity();
    let p = p0 - amplitude * t.cos() * dx;
    let v = (p0 - p + gamma * q0.volume()) / gamma;
    Ok(ConservedState::new(v, u, eq.energy_from(v, u, p)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeftBoundary<T> {
    Piston(PistonSpec<T>),
    Extrapolation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RightBoundary {
    /// Both ghosts hold the far-field state.
    #[default]
    FarField,
    Extrapolation,
    /// Mirror image with the velocity negated.
    Reflecting,
}

impl RightBoundary {
    pub fn name(self) -> &'static str {
        match self {
            RightBoundary::FarField => "far_field",
            RightBoundary::Extrapolation => "extrapolation",
            RightBoundary::Reflecting => "reflecting",
        }
    }
}

fn flip_velocity<T: Real>(q: ConservedState<T>) -> ConservedState<T> {
    ConservedState::new(q[0], -q[1], q[2])
}

/// Fill the two left ghosts at `field.time`; the outer one copies the inner.
pub fn fill_left<T: Real>(field: &mut FieldGrid<T>, eq: &EquationSystem<T>, bc: &LeftBoundary<T>) -> Result<()> {
    let q0 = field.interior()[0];
    let ghost = match bc {
        LeftBoundary::Piston(piston) => {
            let (t, dx, m) = (field.time, field.grid.dx, piston.amplitude);
            if eq.is_linear() {
                fill_piston_linear(&q0, t, dx, m, eq.gamma)?
            } else {
                fill_piston_nonlinear(&q0, t, dx, m, eq.gamma)?
            }
        }
        LeftBoundary::Extrapolation => q0,
    };
    field.set_left_ghosts(ghost, ghost);
    Ok(())
}

pub fn fill_right<T: Real>(field: &mut FieldGrid<T>, eq: &EquationSystem<T>, bc: RightBoundary) {
    let n = field.grid.num_cells;
    let last = field.interior()[n - 1];
    let (first, second) = match bc {
        RightBoundary::FarField => (eq.far_field, eq.far_field),
        RightBoundary::Extrapolation => (last, last),
        RightBoundary::Reflecting => {
            let before = if n > 1 { field.interior()[n - 2] } else { last };
            (flip_velocity(last), flip_velocity(before))
        }
    };
    field.set_right_ghosts(first, second);
}
