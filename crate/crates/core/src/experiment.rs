//! One absorbing-boundary run of the piston problem scored against its reference.

use std::f64::consts::PI;
use std::time::Instant;

use crate::diagnostics::entropy::sponge_entropy;
use crate::diagnostics::metrics::{error_abc, error_series, Trajectory};
use crate::diagnostics::reference::{velocity_snapshot, PistonProblem, Reference};
use crate::equations::SystemKind;
use crate::error::{Error, Result};
use crate::grid::{build_grid, FieldGrid, Layout};
use crate::simulation::{Abc, Simulation};
use crate::sponge::{AbcMethod, ProfileKind, SpongeConfig};

/// Changes to a method's default sponge settings.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpongeOverrides {
    /// New maximum rate for every field the method damps.
    pub sigma: Option<f64>,
    /// Per-field rates; applied after `sigma`.
    pub sigma_fields: Option<[f64; 3]>,
    pub damping_profile: Option<ProfileKind<f64>>,
    pub slowing_profile: Option<ProfileKind<f64>>,
    pub slowing: Option<[bool; 3]>,
    pub relax_profile: Option<ProfileKind<f64>>,
    pub relax_fields: Option<[bool; 3]>,
    pub relax_power: Option<i32>,
}

impl SpongeOverrides {
    pub fn apply(&self, config: &mut SpongeConfig<f64>) {
        if let Some(s) = self.sigma {
            let damped = config.sigma.map(|v| v != 0.0);
            for (v, on) in config.sigma.iter_mut().zip(damped) {
                if on {
                    *v = s;
                }
            }
        }
        if let Some(s) = self.sigma_fields {
            config.sigma = s;
        }
        if let Some(p) = self.damping_profile {
            config.damping_profile = p;
        }
        if let Some(p) = self.slowing_profile {
            config.slowing_profile = p;
        }
        if let Some(s) = self.slowing {
            config.slowing = s;
        }
        if let Some(p) = self.relax_profile {
            config.relax_profile = p;
        }
        if let Some(f) = self.relax_fields {
            config.relax_fields = f;
        }
        if let Some(p) = self.relax_power {
            config.relax_power = p;
        }
    }
}

/// A piston run with one absorbing method and sponge width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseSpec {
    pub problem: PistonProblem,
    pub method: AbcMethod,
    pub omega_over_l: f64,
    pub overrides: SpongeOverrides,
}

impl CaseSpec {
    pub fn new(problem: PistonProblem, method: AbcMethod, omega_over_l: f64) -> Self {
        Self {
            problem,
            method,
            omega_over_l,
            overrides: SpongeOverrides::default(),
        }
    }

    pub fn layout(&self) -> Result<Layout<f64>> {
        let width = if self.method.uses_sponge() {
            self.omega_over_l
        } else {
            0.0
        };
        build_grid(
            self.problem.x_start,
            width,
            self.problem.cells_per_wavelength,
            self.problem.wavelength,
        )
    }

    /// Resolved sponge settings, `None` for methods without a sponge.
    pub fn sponge_config(&self) -> Result<Option<SpongeConfig<f64>>> {
        if !self.method.uses_sponge() {
            return Ok(None);
        }
        let geometry = self
            .layout()?
            .sponge
            .ok_or_else(|| Error::Config(format!("{} needs a positive sponge width", self.method)))?;
        let mut config = SpongeConfig::defaults_for(self.method, geometry);
        self.overrides.apply(&mut config);
        config.validate()?;
        Ok(Some(config))
    }

    pub fn abc(&self) -> Result<Abc<f64>> {
        Abc::new(self.method, self.sponge_config()?)
    }

    /// Initial data, boundaries and method assembled into a simulation.
    pub fn simulation(&self) -> Result<Simulation<f64>> {
        let eq = self.problem.equations()?;
        let layout = self.layout()?;
        let field = FieldGrid::uniform(layout.grid, eq.far_field);
        Ok(Simulation::new(eq, field, self.problem.piston()?, None, self.abc()?)?
            .with_reconstruction(self.problem.reconstruction))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    Diverged,
}

impl RunStatus {
    pub fn name(self) -> &'static str {
        match self {
            RunStatus::Completed => "completed",
            RunStatus::Diverged => "diverged",
        }
    }
}

/// Outcome of [`run_case`].
#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    pub spec: CaseSpec,
    pub status: RunStatus,
    /// Infinite when the run diverged.
    pub e_abc: f64,
    /// Error at each output time reached (`None` below the norm floor).
    pub series: Vec<Option<f64>>,
    pub runtime: f64,
    pub steps: usize,
    /// Time at which the run stopped.
    pub end_time: f64,
}

fn is_breakdown(e: &Error) -> bool {
    matches!(e, Error::Diverged { .. } | Error::NonPhysicalState(_))
}

/// Run `spec` and score it against `reference`, which must come from the
/// same problem. Blow-up and loss of admissibility are reported as a
/// diverged run rather than an error.
pub fn run_case(spec: &CaseSpec, reference: &Reference) -> Result<CaseReport> {
    run_case_observed(spec, reference, |_| Ok(()))
}

/// [`run_case`] with `observe` called on the full field at every output time.
pub fn run_case_observed(
    spec: &CaseSpec,
    reference: &Reference,
    mut observe: impl FnMut(&FieldGrid<f64>) -> Result<()>,
) -> Result<CaseReport> {
    let started = Instant::now();
    let mut sim = spec.simulation()?;
    let cells = spec.layout()?.computational_cells;
    let mut ctl = spec.problem.controller()?;
    let mut trajectory = Trajectory::new(spec.problem.dx());
    let outcome = sim.run(&mut ctl, |f| {
        trajectory.push(f.time, velocity_snapshot(f, cells));
        observe(f)
    });
    let diverged = match outcome {
        Ok(()) => false,
        Err(e) if is_breakdown(&e) => true,
        Err(e) => return Err(e),
    };
    let mut truncated = reference.trajectory.clone();
    truncated.times.truncate(trajectory.len());
    truncated.velocity.truncate(trajectory.len());
    let series = error_series(&truncated, &trajectory)?;
    let mut e_abc = error_abc(&truncated, &trajectory)?;
    let status = if diverged || !e_abc.is_finite() {
        e_abc = f64::INFINITY;
        RunStatus::Diverged
    } else {
        RunStatus::Completed
    };
    Ok(CaseReport {
        spec: *spec,
        status,
        e_abc,
        series,
        runtime: started.elapsed().as_secs_f64(),
        steps: sim.steps,
        end_time: sim.time(),
    })
}

/// Sponge-integrated entropy `(t, S(t))` at every output time of `spec`,
/// starting with the initial state.
pub fn entropy_series(spec: &CaseSpec) -> Result<Vec<(f64, f64)>> {
    let mut sim = spec.simulation()?;
    let gamma = spec.problem.gamma;
    let x_start = spec.layout()?.x_start;
    let mut ctl = spec.problem.controller()?;
    let mut out = vec![(0.0, sponge_entropy(&sim.field, gamma, x_start)?)];
    sim.run(&mut ctl, |f| {
        out.push((f.time, sponge_entropy(f, gamma, x_start)?));
        Ok(())
    })?;
    Ok(out)
}

/// The two sponge-entropy runs: slowing alone, then slowing with damping.
pub fn entropy_study(cells_per_wavelength: usize) -> [CaseSpec; 2] {
    let mut problem = PistonProblem::new(SystemKind::NonlinearLagrangian, cells_per_wavelength);
    problem.cadence = PI / 20.0;
    let mut slow = CaseSpec::new(problem, AbcMethod::Sdo, 2.0);
    slow.overrides.sigma_fields = Some([0.0; 3]);
    let damped = CaseSpec::new(problem, AbcMethod::Sdo, 2.0);
    [slow, damped]
}
