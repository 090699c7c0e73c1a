//! Time-marching driver: grid, boundary data and one absorbing method.

use crate::boundary::{fill_left, fill_right, LeftBoundary, RightBoundary};
use crate::equations::EquationSystem;
use crate::error::{Error, Result};
use crate::grid::{FieldGrid, Grid1D};
use crate::linalg::ConservedState;
use crate::riemann::{semidiscrete_rhs, Reconstruction, RhsWorkspace, SpeedScale};
use crate::scalar::Real;
use crate::sponge::operators::{add_ndo_source, add_sdo_source, add_ssdo_source, NdoWorkspace};
use crate::sponge::relax::{relax_matrix, relax_scalar};
use crate::sponge::{AbcMethod, SpongeConfig};
use crate::timestepping::{heun_step, HeunScratch, SemiDiscrete, StepController};

/// Linearized runs are declared diverged once `|u|` exceeds this.
pub const LINEAR_BLOWUP: f64 = 1e6;

/// An absorbing method with its sponge parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abc<T> {
    pub method: AbcMethod,
    pub config: Option<SpongeConfig<T>>,
}

impl<T: Real> Abc<T> {
    pub fn none() -> Self {
        Self {
            method: AbcMethod::None,
            config: None,
        }
    }

    pub fn new(method: AbcMethod, config: Option<SpongeConfig<T>>) -> Result<Self> {
        match (method.uses_sponge(), &config) {
            (true, None) => Err(Error::Config(format!("{method} needs a sponge layer"))),
            (true, Some(c)) => {
                c.validate()?;
                Ok(Self { method, config })
            }
            (false, _) => Ok(Self { method, config: None }),
        }
    }

    /// Boundary condition imposed at the right end of the grid.
    pub fn default_right_boundary(&self) -> RightBoundary {
        match self.method {
            AbcMethod::Extrapolation => RightBoundary::Extrapolation,
            _ => RightBoundary::FarField,
        }
    }
}

/// Profile values sampled once on the grid.
#[derive(Debug, Clone, Default)]
struct Samples<T> {
    scale_interfaces: Vec<[T; 3]>,
    scale_centers: Vec<[T; 3]>,
    scalar_interfaces: Vec<T>,
    scalar_centers: Vec<T>,
    damping: Vec<[T; 3]>,
    scalar_damping: Vec<T>,
    relax: Vec<[T; 3]>,
    relax_scalar: Vec<T>,
    slowing_active: bool,
}

impl<T: Real> Samples<T> {
    fn new(grid: &Grid1D<T>, config: &SpongeConfig<T>) -> Self {
        let n = grid.num_cells;
        let centers: Vec<T> = (0..n).map(|i| grid.center(i)).collect();
        let ifaces: Vec<T> = (0..=n).map(|i| grid.interface(i)).collect();
        let scale_interfaces: Vec<[T; 3]> = ifaces.iter().map(|&x| config.slowing_factors(x)).collect();
        let scale_centers: Vec<[T; 3]> = centers.iter().map(|&x| config.slowing_factors(x)).collect();
        let slowing_active = config.slowing.iter().any(|&on| on);
        Self {
            scalar_interfaces: scale_interfaces.iter().map(|s| s[2]).collect(),
            scalar_centers: scale_centers.iter().map(|s| s[2]).collect(),
            scale_interfaces,
            scale_centers,
            damping: centers.iter().map(|&x| config.damping_rates(x)).collect(),
            scalar_damping: centers.iter().map(|&x| config.scalar_damping(x)).collect(),
            relax: centers.iter().map(|&x| config.relax_weights(x)).collect(),
            relax_scalar: centers.iter().map(|&x| config.relax_weights(x)[2]).collect(),
            slowing_active,
        }
    }
}

/// Everything except the state: boundary data, method and workspaces.
struct Operator<T> {
    eq: EquationSystem<T>,
    left: LeftBoundary<T>,
    right: RightBoundary,
    abc: Abc<T>,
    reconstruction: Reconstruction,
    samples: Samples<T>,
    rhs_work: RhsWorkspace<T>,
    ndo_work: NdoWorkspace<T>,
}

impl<T: Real> Operator<T> {
    fn relax(&self, field: &mut FieldGrid<T>) -> Result<()> {
        let far = self.eq.far_field;
        if self.abc.method.is_directional() {
            relax_matrix(field.interior_mut(), &self.samples.relax, far, &self.eq)
        } else {
            relax_scalar(field.interior_mut(), &self.samples.relax_scalar, far);
            Ok(())
        }
    }
}

impl<T: Real> SemiDiscrete<T> for Operator<T> {
    fn fill_ghosts(&mut self, field: &mut FieldGrid<T>) -> Result<()> {
        fill_left(field, &self.eq, &self.left)?;
        fill_right(field, &self.eq, self.right);
        Ok(())
    }

    fn rhs(&mut self, field: &FieldGrid<T>, out: &mut [ConservedState<T>]) -> Result<()> {
        let s = &self.samples;
        let scale = match self.abc.method {
            AbcMethod::Sdo if s.slowing_active => Some(SpeedScale::PerField {
                interfaces: &s.scale_interfaces,
                centers: &s.scale_centers,
            }),
            AbcMethod::SSdo if s.slowing_active => Some(SpeedScale::Scalar {
                interfaces: &s.scalar_interfaces,
                centers: &s.scalar_centers,
            }),
            _ => None,
        };
        semidiscrete_rhs(field, &self.eq, self.reconstruction, scale, &mut self.rhs_work, out)?;
        match (self.abc.method, &self.abc.config) {
            (AbcMethod::Sdo, _) => add_sdo_source(&self.eq, field.interior(), &s.damping, &s.scale_centers, out)?,
            (AbcMethod::SSdo, _) => add_ssdo_source(
                self.eq.far_field,
                field.interior(),
                &s.scalar_damping,
                &s.scalar_centers,
                out,
            ),
            (AbcMethod::Ndo, Some(config)) => add_ndo_source(field, &self.eq, config, &mut self.ndo_work, out)?,
            _ => {}
        }
        Ok(())
    }

    fn stage_hook(&mut self, field: &mut FieldGrid<T>) -> Result<()> {
        if matches!(self.abc.method, AbcMethod::RmRk | AbcMethod::RmMRk) {
            self.relax(field)?;
        }
        Ok(())
    }
}

/// A configured run of the piston problem (or any other initial data).
pub struct Simulation<T> {
    pub field: FieldGrid<T>,
    op: Operator<T>,
    scratch: HeunScratch<T>,
    pub steps: usize,
}

impl<T: Real> Simulation<T> {
    pub fn new(
        eq: EquationSystem<T>,
        field: FieldGrid<T>,
        left: LeftBoundary<T>,
        right: Option<RightBoundary>,
        abc: Abc<T>,
    ) -> Result<Self> {
        let samples = match &abc.config {
            Some(config) => {
                let end = field.grid.length();
                if config.geometry.x_end > end * (T::one() + T::lit(1e-12)) {
                    return Err(Error::Config(format!(
                        "sponge ends at {} beyond the grid end {end}",
                        config.geometry.x_end
                    )));
                }
                Samples::new(&field.grid, config)
            }
            None => Samples::default(),
        };
        let right = right.unwrap_or_else(|| abc.default_right_boundary());
        Ok(Self {
            field,
            op: Operator {
                eq,
                left,
                right,
                abc,
                reconstruction: Reconstruction::Minmod,
                samples,
                rhs_work: RhsWorkspace::default(),
                ndo_work: NdoWorkspace::default(),
            },
            scratch: HeunScratch::default(),
            steps: 0,
        })
    }

    pub fn with_reconstruction(mut self, reconstruction: Reconstruction) -> Self {
        self.op.reconstruction = reconstruction;
        self
    }

    pub fn equations(&self) -> &EquationSystem<T> {
        &self.op.eq
    }

    pub fn abc(&self) -> &Abc<T> {
        &self.op.abc
    }

    pub fn time(&self) -> T {
        self.field.time
    }

    /// Advance by `dt` with the method's relaxation placed around the step.
    pub fn step(&mut self, dt: T) -> Result<()> {
        let method = self.op.abc.method;
        if matches!(method, AbcMethod::Rm2 | AbcMethod::RmM2) {
            self.op.relax(&mut self.field)?;
        }
        heun_step(&mut self.op, &mut self.field, dt, &mut self.scratch)?;
        if matches!(
            method,
            AbcMethod::Rm | AbcMethod::RmM | AbcMethod::Rm2 | AbcMethod::RmM2
        ) {
            self.op.relax(&mut self.field)?;
        }
        self.steps += 1;
        if self.op.eq.is_linear() {
            let blowup = T::lit(LINEAR_BLOWUP);
            if self
                .field
                .interior()
                .iter()
                .any(|q| !q.is_finite() || q.velocity().abs() > blowup)
            {
                return Err(Error::Diverged {
                    time: self.field.time.as_f64(),
                });
            }
        }
        Ok(())
    }

    /// March to `controller.t_final`, calling `observe` at every output time.
    pub fn run(
        &mut self,
        controller: &mut StepController<T>,
        mut observe: impl FnMut(&FieldGrid<T>) -> Result<()>,
    ) -> Result<()> {
        while !controller.finished(self.field.time) {
            let dt = controller.dt(&self.field, &self.op.eq)?;
            self.step(dt)?;
            if controller.take_output(self.field.time).is_some() {
                observe(&self.field)?;
            }
        }
        Ok(())
    }

    /// Refresh the ghost cells for the current time (for inspection).
    pub fn fill_ghosts(&mut self) -> Result<()> {
        self.op.fill_ghosts(&mut self.field)
    }
}
