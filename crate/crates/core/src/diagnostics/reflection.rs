//! Reflection coefficients of the sponge layer: closed forms for a single
//! right-going incident wave, and the wall-reflection measurement.

use std::f64::consts::PI;

use crate::boundary::{LeftBoundary, RightBoundary};
use crate::equations::EquationSystem;
use crate::error::{Error, Result};
use crate::grid::{build_grid, FieldGrid, Layout};
use crate::simulation::{Abc, Simulation};
use crate::sponge::{AbcMethod, ProfileKind, SpongeConfig};
use crate::timestepping::StepController;

use super::quadrature::integrate;

const QUADRATURE_TOLERANCE: f64 = 1e-10;
/// `ln Γ` is evaluated with `Γ` clamped to this floor.
const LOG_FLOOR: f64 = 1e-300;

/// `∫_{x_s}^{x_∞} d_i(z) dz` for each field.
pub fn integrated_damping(config: &SpongeConfig<f64>) -> Result<[f64; 3]> {
    let g = config.geometry;
    let mut out = [0.0; 3];
    for (i, o) in out.iter_mut().enumerate() {
        if config.sigma[i] != 0.0 {
            *o = integrate(|x| config.damping_rates(x)[i], g.x_start, g.x_end, QUADRATURE_TOLERANCE)?;
        }
    }
    Ok(out)
}

/// `∫₀¹ ln Γ(φ)^p dφ` of the relaxation weight.
pub fn integrated_log_weight(config: &SpongeConfig<f64>) -> Result<f64> {
    let p = config.relax_power as f64;
    let profile = config.relax_profile;
    Ok(p * integrate(
        |phi| profile.at_phi(phi).max(LOG_FLOOR).ln(),
        0.0,
        1.0,
        QUADRATURE_TOLERANCE,
    )?)
}

/// Closed-form amplitude ratio of the wave returning from a wall at `x_∞`
/// for a right-going incident wave of the linearized system.
///
/// The incident leg is attenuated through field 3, the reflected leg
/// through field 1. Relaxation methods apply their weight once per step
/// (twice for the sandwich and per-stage variants) with `Δt = C Δx / |λ|`.
pub fn reflection_theory(
    method: AbcMethod,
    config: &SpongeConfig<f64>,
    eq: &EquationSystem<f64>,
    dx: f64,
    courant: f64,
) -> Result<f64> {
    let lambda = eq.max_speed(&eq.far_field)?;
    match method {
        AbcMethod::Sdo => {
            let d = integrated_damping(config)?;
            Ok((-(d[2] + d[0])).exp())
        }
        AbcMethod::SSdo => {
            let d = integrated_damping(config)?;
            Ok((-2.0 * d[2] / lambda).exp())
        }
        AbcMethod::Rm | AbcMethod::RmM | AbcMethod::Rm2 | AbcMethod::RmM2 | AbcMethod::RmRk | AbcMethod::RmMRk => {
            let per_step = match method {
                AbcMethod::Rm | AbcMethod::RmM => 1.0,
                _ => 2.0,
            };
            let legs = [config.relax_fields[2], config.relax_fields[0]]
                .iter()
                .filter(|&&on| on)
                .count() as f64;
            let steps = config.geometry.width() / (courant * dx);
            Ok((steps * per_step * legs * integrated_log_weight(config)?).exp())
        }
        other => Err(Error::Domain(format!(
            "no closed-form reflection coefficient for {other}"
        ))),
    }
}

/// Wall-reflection experiment on the linearized system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionExperiment {
    pub cells_per_wavelength: usize,
    pub omega_over_l: f64,
    pub gamma: f64,
    pub courant: f64,
    pub x_start: f64,
    pub t_final: f64,
}

/// One point of a reflection study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionRecord {
    pub method: AbcMethod,
    pub cells_per_wavelength: usize,
    pub omega_over_l: f64,
    pub dx: f64,
    /// Largest damping rate over the fields (zero for relaxation).
    pub sigma: f64,
    pub theory: f64,
    pub numerical: f64,
}

impl ReflectionExperiment {
    pub fn new(cells_per_wavelength: usize, omega_over_l: f64) -> Self {
        Self {
            cells_per_wavelength,
            omega_over_l,
            gamma: 1.4,
            courant: 0.8,
            x_start: 20.0 * PI,
            t_final: 50.0,
        }
    }

    pub fn layout(&self) -> Result<Layout<f64>> {
        build_grid(self.x_start, self.omega_over_l, self.cells_per_wavelength, 2.0 * PI)
    }

    /// Method defaults with `Γ_B` damping and no slowing (a slowed wave
    /// would not return within `t_final`), then `adjust`.
    pub fn config(&self, method: AbcMethod, adjust: impl FnOnce(&mut SpongeConfig<f64>)) -> Result<SpongeConfig<f64>> {
        let geometry = self
            .layout()?
            .sponge
            .ok_or_else(|| Error::Config("reflection study needs a sponge".into()))?;
        let mut config = SpongeConfig::defaults_for(method, geometry);
        config.damping_profile = ProfileKind::GammaB { b: 0.5 };
        config.slowing = [false; 3];
        adjust(&mut config);
        config.validate()?;
        Ok(config)
    }

    /// Velocity range on `[0, x_s]` after the round trip over the initial range.
    pub fn measure(&self, method: AbcMethod, config: &SpongeConfig<f64>) -> Result<f64> {
        self.measure_with(Abc::new(method, Some(*config))?)
    }

    /// [`measure`](Self::measure) without any sponge: the wall reflection
    /// reduced only by the scheme's own dissipation.
    pub fn measure_wall(&self) -> Result<f64> {
        self.measure_with(Abc::none())
    }

    fn measure_with(&self, abc: Abc<f64>) -> Result<f64> {
        let eq = EquationSystem::linearized(self.gamma)?;
        let layout = self.layout()?;
        let r3 = eq.eigenstructure(&eq.far_field)?.right.column(2);
        let field = FieldGrid::from_fn(layout.grid, |x| {
            if (9.0 * PI..=11.0 * PI).contains(&x) {
                r3 * (x - 10.0 * PI).sin()
            } else {
                eq.far_field
            }
        });
        let comp = layout.computational_cells;
        let range = |f: &FieldGrid<f64>| {
            let u = f.interior()[..comp].iter().map(|q| q.velocity());
            let (lo, hi) = u.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            hi - lo
        };
        let initial = range(&field);
        let mut sim = Simulation::new(
            eq,
            field,
            LeftBoundary::Extrapolation,
            Some(RightBoundary::Reflecting),
            abc,
        )?;
        let mut ctl = StepController::new(self.courant, self.t_final, vec![])?;
        sim.run(&mut ctl, |_| Ok(()))?;
        Ok(range(&sim.field) / initial)
    }

    pub fn record(&self, method: AbcMethod, config: &SpongeConfig<f64>) -> Result<ReflectionRecord> {
        let eq = EquationSystem::linearized(self.gamma)?;
        let dx = 2.0 * PI / self.cells_per_wavelength as f64;
        Ok(ReflectionRecord {
            method,
            cells_per_wavelength: self.cells_per_wavelength,
            omega_over_l: self.omega_over_l,
            dx,
            sigma: config.sigma.iter().fold(0.0, |a: f64, &b| a.max(b)),
            theory: reflection_theory(method, config, &eq, dx, self.courant)?,
            numerical: self.measure(method, config)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpongeGeometry;
    use approx::assert_abs_diff_eq;

    fn geometry() -> SpongeGeometry<f64> {
        SpongeGeometry::new(20.0 * PI, 22.0 * PI).unwrap()
    }

    #[test]
    fn no_damping_reflects_fully() {
        let eq = EquationSystem::linearized(1.4).unwrap();
        for method in [AbcMethod::Sdo, AbcMethod::SSdo] {
            let mut c = SpongeConfig::defaults_for(method, geometry());
            c.sigma = [0.0; 3];
            assert_eq!(reflection_theory(method, &c, &eq, 0.1, 0.8).unwrap(), 1.0);
        }
    }

    #[test]
    fn damping_integral_of_cubic_profile() {
        // ∫(1 - Γ_A) over the sponge is half its width
        let c = SpongeConfig::defaults_for(AbcMethod::Sdo, geometry());
        let d = integrated_damping(&c).unwrap();
        assert_abs_diff_eq!(d[2], 30.0 * PI, epsilon = 1e-9);
        assert_eq!(d[0], 0.0);
    }

    #[test]
    fn log_weight_of_b_profile() {
        // b = 1: ∫₀¹ ln(1 - φ³) dφ = -3 + (3/2) ln 3 + π/(2√3)
        let mut c = SpongeConfig::defaults_for(AbcMethod::Rm, geometry());
        c.relax_profile = ProfileKind::GammaB { b: 1.0 };
        let exact = -3.0 + 1.5 * 3f64.ln() + PI / (2.0 * 3f64.sqrt());
        assert_abs_diff_eq!(integrated_log_weight(&c).unwrap(), exact, epsilon = 1e-10);
        c.relax_power = 2;
        assert_abs_diff_eq!(integrated_log_weight(&c).unwrap(), 2.0 * exact, epsilon = 1e-10);
    }

    #[test]
    fn scalar_relaxation_squares_directional() {
        let eq = EquationSystem::linearized(1.4).unwrap();
        let rm = SpongeConfig::defaults_for(AbcMethod::Rm, geometry());
        let rmm = SpongeConfig::defaults_for(AbcMethod::RmM, geometry());
        let a = reflection_theory(AbcMethod::Rm, &rm, &eq, 0.1, 0.8).unwrap();
        let b = reflection_theory(AbcMethod::RmM, &rmm, &eq, 0.1, 0.8).unwrap();
        assert_abs_diff_eq!(a, b * b, epsilon = 1e-14);
        assert!(a <= b);
    }

    #[test]
    fn theory_decreases_with_sigma() {
        let eq = EquationSystem::linearized(1.4).unwrap();
        let mut last = 1.0;
        for s in [0.1, 0.5, 1.0, 3.0] {
            let mut c = SpongeConfig::defaults_for(AbcMethod::SSdo, geometry());
            c.sigma = [s; 3];
            let v = reflection_theory(AbcMethod::SSdo, &c, &eq, 0.1, 0.8).unwrap();
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn unsupported_methods() {
        let eq = EquationSystem::linearized(1.4).unwrap();
        let c = SpongeConfig::defaults_for(AbcMethod::Ndo, geometry());
        assert!(reflection_theory(AbcMethod::Ndo, &c, &eq, 0.1, 0.8).is_err());
    }
}
