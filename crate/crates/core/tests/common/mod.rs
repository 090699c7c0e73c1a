//! Measurements shared by the property and acceptance suites. Each returns
//! the measured quantity; the callers decide what to compare it against.

#![allow(dead_code)]

use std::f64::consts::PI;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

use sponge_core::boundary::{LeftBoundary, PistonSpec, RightBoundary};
use sponge_core::diagnostics::metrics::{error_num, Trajectory};
use sponge_core::diagnostics::reference::{reference_solution, velocity_snapshot, PistonProblem};
use sponge_core::experiment::{run_case, CaseSpec, RunStatus};
use sponge_core::grid::{build_grid, Grid1D};
use sponge_core::riemann::Reconstruction;
use sponge_core::simulation::{Abc, Simulation};
use sponge_core::sponge::relax::{relax_matrix, relax_scalar};
use sponge_core::sponge::{AbcMethod, SpongeConfig};
use sponge_core::timestepping::{compute_dt, StepController};
use sponge_core::{EquationSystem, FieldGrid, Mat3, State, SystemKind};

pub const KINDS: [SystemKind; 2] = [SystemKind::LinearizedLagrangian, SystemKind::NonlinearLagrangian];

pub fn admissible(v: f64, u: f64, p: f64) -> State {
    let eq = EquationSystem::nonlinear(1.4).unwrap();
    State::new(v, u, eq.energy_from(v, u, p))
}

pub fn state() -> impl Strategy<Value = State> {
    (0.2f64..5.0, -2.0f64..2.0, 0.2f64..5.0).prop_map(|(v, u, p)| admissible(v, u, p))
}

pub fn sample<S: Strategy>(s: &S, runner: &mut TestRunner) -> S::Value {
    s.new_tree(runner).unwrap().current()
}

pub fn to_na(m: &Mat3<f64>) -> nalgebra::Matrix3<f64> {
    nalgebra::Matrix3::from_fn(|i, j| m.0[i][j])
}

/// Largest entry of `field_matrix − R diag(σ) R⁻¹` (numeric inverse),
/// relative to the size of the matrix, over `count` random states and rates.
pub fn field_matrix_gap(q: &State, sigma: [f64; 3]) -> f64 {
    let mut worst: f64 = 0.0;
    for eq in KINDS.map(|k| EquationSystem::new(k, 1.4).unwrap()) {
        let r = to_na(&eq.eigenstructure(q).unwrap().right);
        let d = nalgebra::Matrix3::from_diagonal(&nalgebra::Vector3::from(sigma));
        let numeric = r * d * r.try_inverse().unwrap();
        let closed = to_na(&eq.field_matrix(q, sigma).unwrap());
        worst = worst.max((closed - numeric).abs().max() / (1.0 + numeric.abs().max()));
    }
    worst
}

pub fn random_field_matrix_gap(count: usize) -> f64 {
    let mut runner = TestRunner::deterministic();
    let strategy = (state(), prop::array::uniform3(-3.0f64..3.0));
    (0..count)
        .map(|_| {
            let (q, s) = sample(&strategy, &mut runner);
            field_matrix_gap(&q, s)
        })
        .fold(0.0, f64::max)
}

/// Piston-driven run on `[0, 4π]` with a one-wavelength sponge.
pub fn sponge_sim(kind: SystemKind, method: AbcMethod, adjust: impl FnOnce(&mut SpongeConfig<f64>)) -> Simulation<f64> {
    let eq = EquationSystem::new(kind, 1.4).unwrap();
    let layout = build_grid(4.0 * PI, 1.0, 20, 2.0 * PI).unwrap();
    let mut config = SpongeConfig::defaults_for(method, layout.sponge.unwrap());
    adjust(&mut config);
    let field = FieldGrid::uniform(layout.grid, eq.far_field);
    let piston = LeftBoundary::Piston(PistonSpec::new(0.4).unwrap());
    Simulation::new(eq, field, piston, None, Abc::new(method, Some(config)).unwrap()).unwrap()
}

pub fn max_diff(a: &FieldGrid<f64>, b: &FieldGrid<f64>) -> f64 {
    a.interior()
        .iter()
        .zip(b.interior())
        .map(|(x, y)| (*x - *y).max_abs())
        .fold(0.0, f64::max)
}

/// Gap between `n` Strang steps with weight `Γ` and the Lie-Trotter
/// sequence with `Γ²`, aligned as `Γ S (Γ² S)^{n-1} Γ` on the linear system.
pub fn strang_gap(n: usize) -> f64 {
    let kind = SystemKind::LinearizedLagrangian;
    let mut strang = sponge_sim(kind, AbcMethod::Rm2, |c| c.relax_power = 1);
    let mut lie = sponge_sim(kind, AbcMethod::Rm, |c| c.relax_power = 2);
    let config = strang.abc().config.unwrap();
    let grid = strang.field.grid;
    let weights: Vec<f64> = (0..grid.num_cells)
        .map(|i| config.relax_weights(grid.center(i))[2])
        .collect();
    let far = lie.equations().far_field;
    let dt = 0.8 * grid.dx / 1.4;
    relax_scalar(lie.field.interior_mut(), &weights, far);
    for _ in 0..n - 1 {
        strang.step(dt).unwrap();
        lie.step(dt).unwrap();
    }
    strang.step(dt).unwrap();
    // last step without the trailing Γ², then a single Γ
    let piston = LeftBoundary::Piston(PistonSpec::new(0.4).unwrap());
    let mut bare = Simulation::new(*lie.equations(), lie.field.clone(), piston, None, Abc::none()).unwrap();
    bare.step(dt).unwrap();
    let mut aligned = bare.field;
    relax_scalar(aligned.interior_mut(), &weights, far);
    assert!(strang.field.interior().iter().any(|q| q.velocity().abs() > 0.1));
    max_diff(&strang.field, &aligned)
}

/// Gap between RM and RM-M with every field relaxed by the same weight.
pub fn directional_scalar_gap(kind: SystemKind, steps: usize) -> f64 {
    let mut rm = sponge_sim(kind, AbcMethod::Rm, |_| {});
    let mut rmm = sponge_sim(kind, AbcMethod::RmM, |c| c.relax_fields = [true; 3]);
    let dt = 0.8 * rm.field.grid.dx / 2.0;
    for _ in 0..steps {
        rm.step(dt).unwrap();
        rmm.step(dt).unwrap();
    }
    max_diff(&rm.field, &rmm.field)
}

/// Cells among `count` random ones where relaxation moved the state away
/// from `q̄`: in the Euclidean norm for RM, per characteristic coefficient
/// for RM-M.
pub fn relaxation_violations(count: usize) -> (usize, usize) {
    let mut runner = TestRunner::deterministic();
    let before = sample(&prop::collection::vec(state(), count), &mut runner);
    let w = sample(
        &prop::collection::vec(prop::array::uniform3(0.0f64..=1.0), count),
        &mut runner,
    );
    let eq = EquationSystem::nonlinear(1.4).unwrap();
    let far = eq.far_field;

    let mut after = before.clone();
    let scalar: Vec<f64> = w.iter().map(|g| g[0]).collect();
    relax_scalar(&mut after, &scalar, far);
    let scalar_bad = before
        .iter()
        .zip(&after)
        .filter(|(q0, q1)| (**q1 - far).norm2() > (**q0 - far).norm2() * (1.0 + 1e-14))
        .count();

    let mut after = before.clone();
    relax_matrix(&mut after, &w, far, &eq).unwrap();
    let matrix_bad = before
        .iter()
        .zip(&after)
        .filter(|(q0, q1)| {
            let left = eq.eigenstructure(q0).unwrap().right.inverse().unwrap();
            let (c0, c1) = (left.apply(**q0 - far), left.apply(**q1 - far));
            (0..3).any(|k| c1[k].abs() > c0[k].abs() * (1.0 + 1e-9) + 1e-12)
        })
        .count();
    (scalar_bad, matrix_bad)
}

fn gaussian_pulse(kind: SystemKind, recon: Reconstruction, cells: usize) -> Trajectory {
    let eq = EquationSystem::new(kind, 1.4).unwrap();
    let grid = Grid1D::new(cells, 60.0 / cells as f64).unwrap();
    let r3 = eq.eigenstructure(&eq.far_field).unwrap().right.column(2);
    let field = FieldGrid::from_fn(grid, |x| {
        eq.far_field + r3 * (0.02 * (-(x - 25.0) * (x - 25.0) / 18.0).exp())
    });
    let mut sim = Simulation::new(
        eq,
        field,
        LeftBoundary::Extrapolation,
        Some(RightBoundary::Extrapolation),
        Abc::none(),
    )
    .unwrap()
    .with_reconstruction(recon);
    let mut ctl = StepController::new(0.8, 5.0, vec![5.0]).unwrap();
    let mut out = Trajectory::new(grid.dx);
    sim.run(&mut ctl, |f| {
        out.push(f.time, velocity_snapshot(f, cells));
        Ok(())
    })
    .unwrap();
    out
}

/// Self-convergence orders of a weak right-going Gaussian, stopped long
/// before it could steepen, over successive grid doublings.
pub fn observed_orders(kind: SystemKind, recon: Reconstruction, grids: &[usize]) -> Vec<f64> {
    let runs: Vec<Trajectory> = grids.iter().map(|&n| gaussian_pulse(kind, recon, n)).collect();
    let errors: Vec<f64> = runs.windows(2).map(|p| error_num(&p[0], &p[1]).unwrap()).collect();
    errors.windows(2).map(|e| (e[0] / e[1]).log2()).collect()
}

/// Largest deviation from `q̄` after `steps` CFL steps with a resting piston.
pub fn steady_deviation(kind: SystemKind, method: AbcMethod, steps: usize) -> f64 {
    let eq = EquationSystem::new(kind, 1.4).unwrap();
    let layout = build_grid(2.0 * PI, 1.0, 10, 2.0 * PI).unwrap();
    let config = method
        .uses_sponge()
        .then(|| SpongeConfig::defaults_for(method, layout.sponge.unwrap()));
    let field = FieldGrid::uniform(layout.grid, eq.far_field);
    let piston = LeftBoundary::Piston(PistonSpec::new(0.0).unwrap());
    let mut sim = Simulation::new(eq, field, piston, None, Abc::new(method, config).unwrap()).unwrap();
    let dt = compute_dt(&sim.field, &eq, 0.8, f64::INFINITY).unwrap();
    for _ in 0..steps {
        sim.step(dt).unwrap();
    }
    sim.field
        .interior()
        .iter()
        .map(|q| (*q - eq.far_field).max_abs())
        .fold(0.0, f64::max)
}

/// E_ABC of every method for a resting piston; `None` marks a diverged run.
pub fn resting_piston_errors(kind: SystemKind) -> Vec<(AbcMethod, Option<f64>)> {
    let mut problem = PistonProblem::new(kind, 10);
    problem.amplitude = 0.0;
    problem.t_final = 8.0 * PI;
    let reference = reference_solution(&problem).unwrap();
    AbcMethod::ALL
        .iter()
        .map(|&m| {
            let r = run_case(&CaseSpec::new(problem, m, 1.0), &reference).unwrap();
            (m, (r.status == RunStatus::Completed).then_some(r.e_abc))
        })
        .collect()
}
