//! CFL step selection and Heun's two-stage Runge-Kutta method.

use crate::equations::EquationSystem;
use crate::error::{Error, Result};
use crate::grid::FieldGrid;
use crate::linalg::ConservedState;
use crate::scalar::Real;

/// Default Courant number.
pub const DEFAULT_COURANT: f64 = 0.8;

/// Steps that would end within this relative distance of a stop time are
/// stretched to land on it exactly.
const LANDING_SLACK: f64 = 1e-9;

/// A semidiscrete system `dQ/dt = L(Q)` with boundary data and an optional
/// per-stage post-processing hook.
pub trait SemiDiscrete<T: Real> {
    /// Refresh ghost cells for `field.time`.
    fn fill_ghosts(&mut self, field: &mut FieldGrid<T>) -> Result<()>;

    /// Evaluate `L(Q)` for the interior cells; ghosts are already filled.
    fn rhs(&mut self, field: &FieldGrid<T>, out: &mut [ConservedState<T>]) -> Result<()>;

    /// Applied to the state after every Runge-Kutta stage.
    fn stage_hook(&mut self, _field: &mut FieldGrid<T>) -> Result<()> {
        Ok(())
    }
}

/// Largest characteristic speed over the interior cells.
pub fn max_wave_speed<T: Real>(field: &FieldGrid<T>, eq: &EquationSystem<T>) -> Result<T> {
    if eq.is_linear() {
        return Ok(eq.gamma);
    }
    field
        .interior()
        .iter()
        .try_fold(T::zero(), |acc, q| Ok(acc.max(eq.max_speed(q)?)))
}

/// `Δt = C Δx / max |λ|`, shortened so that `t + Δt` does not pass `stop`.
pub fn compute_dt<T: Real>(field: &FieldGrid<T>, eq: &EquationSystem<T>, courant: T, stop: T) -> Result<T> {
    let speed = max_wave_speed(field, eq)?;
    let dt = courant * field.grid.dx / speed;
    Ok(clip_to_stop(field.time, dt, stop))
}

/// Shorten (or minimally stretch) `dt` so the step lands on `stop`.
pub fn clip_to_stop<T: Real>(t: T, dt: T, stop: T) -> T {
    let remaining = stop - t;
    if t + dt * (T::one() + T::lit(LANDING_SLACK)) >= stop {
        remaining
    } else {
        dt
    }
}

/// Courant number, output times and final time of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct StepController<T> {
    pub courant: T,
    pub t_final: T,
    outputs: Vec<T>,
    next_output: usize,
}

impl<T: Real> StepController<T> {
    /// Output times beyond `t_final` are dropped; `t_final` is always a stop.
    pub fn new(courant: T, t_final: T, mut outputs: Vec<T>) -> Result<Self> {
        if !(courant > T::zero() && courant <= T::one()) {
            return Err(Error::Config(format!(
                "Courant number must lie in (0, 1], got {courant}"
            )));
        }
        outputs.retain(|&t| t <= t_final);
        outputs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self {
            courant,
            t_final,
            outputs,
            next_output: 0,
        })
    }

    /// Evenly spaced outputs `k·Δt_out` for `k ≥ 1` up to `t_final`.
    pub fn with_cadence(courant: T, t_final: T, cadence: T) -> Result<Self> {
        if !(cadence > T::zero()) {
            return Err(Error::Config("output cadence must be positive".into()));
        }
        let count = (t_final / cadence + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
        let outputs = (1..=count).map(|k| T::from_usize(k).unwrap() * cadence).collect();
        Self::new(courant, t_final, outputs)
    }

    pub fn outputs(&self) -> &[T] {
        &self.outputs
    }

    /// Earliest pending output time, or `t_final`.
    pub fn next_stop(&self) -> T {
        self.outputs
            .get(self.next_output)
            .copied()
            .unwrap_or(self.t_final)
            .min(self.t_final)
    }

    pub fn dt(&self, field: &FieldGrid<T>, eq: &EquationSystem<T>) -> Result<T> {
        compute_dt(field, eq, self.courant, self.next_stop())
    }

    /// Consume the pending output if `t` has reached it.
    pub fn take_output(&mut self, t: T) -> Option<T> {
        let next = *self.outputs.get(self.next_output)?;
        if t >= next {
            self.next_output += 1;
            Some(next)
        } else {
            None
        }
    }

    pub fn finished(&self, t: T) -> bool {
        t >= self.t_final
    }
}

/// Stage storage for [`heun_step`].
#[derive(Debug, Clone, Default)]
pub struct HeunScratch<T> {
    start: Vec<ConservedState<T>>,
    slope: Vec<ConservedState<T>>,
}

/// One step of Heun's method:
/// `Q* = Qⁿ + Δt L(Qⁿ)`, `Qⁿ⁺¹ = ½Qⁿ + ½(Q* + Δt L(Q*))`.
///
/// Ghosts are refreshed at `t` and `t + Δt` before the two evaluations; the
/// stage hook runs after each stage.
pub fn heun_step<T: Real, S: SemiDiscrete<T> + ?Sized>(
    system: &mut S,
    field: &mut FieldGrid<T>,
    dt: T,
    scratch: &mut HeunScratch<T>,
) -> Result<()> {
    let n = field.grid.num_cells;
    let t0 = field.time;
    scratch.start.clear();
    scratch.start.extend_from_slice(field.interior());
    scratch.slope.resize(n, ConservedState::zero());

    system.fill_ghosts(field)?;
    system.rhs(field, &mut scratch.slope)?;
    for (q, k) in field.interior_mut().iter_mut().zip(&scratch.slope) {
        *q += *k * dt;
    }
    field.time = t0 + dt;
    system.stage_hook(field)?;

    system.fill_ghosts(field)?;
    system.rhs(field, &mut scratch.slope)?;
    let half = T::half();
    for ((q, k), q0) in field.interior_mut().iter_mut().zip(&scratch.slope).zip(&scratch.start) {
        *q = *q0 * half + (*q + *k * dt) * half;
    }
    system.stage_hook(field)?;

    if !field.interior().iter().all(|q| q.is_finite()) {
        return Err(Error::Diverged {
            time: field.time.as_f64(),
        });
    }
    Ok(())
}
