//! Second-order wave-propagation spatial discretization.
//!
//! Cell edges come from a minmod-limited linear reconstruction in conserved
//! variables by default (see [`Reconstruction`] for the alternatives); interfaces are resolved with the two-speed HLL solver, which for
//! the symmetric Lagrangian eigenstructure is the Rusanov solver. The update
//! is written in fluctuation form so that the slowing-down operator (a
//! nonconservative product) can scale the fluctuations directly.

use crate::equations::EquationSystem;
use crate::error::Result;
use crate::grid::{FieldGrid, GHOSTS};
use crate::linalg::ConservedState;
use crate::scalar::Real;

/// Speeds closer than this are treated as coincident.
pub const DEGENERATE_SPEED_GAP: f64 = 1e-14;

/// Half the cell's limited increment, limited field by field in the
/// eigenbasis at `cell`; zero if that eigenbasis is unavailable.
pub fn characteristic_half_slope<T: Real>(
    eq: &EquationSystem<T>,
    prev: &ConservedState<T>,
    cell: &ConservedState<T>,
    next: &ConservedState<T>,
) -> ConservedState<T> {
    let Ok(es) = eq.eigenstructure(cell) else {
        return ConservedState::zero();
    };
    let Some(left) = es.right.inverse() else {
        return ConservedState::zero();
    };
    let a = left.apply(*cell - *prev);
    let b = left.apply(*next - *cell);
    es.right.apply(a.zip_with(b, minmod)) * T::half()
}

/// Split of an interface flux jump into left- and right-going parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fluctuations<T> {
    /// `A⁻Δq`, sent to the cell left of the interface.
    pub left_going: ConservedState<T>,
    /// `A⁺Δq`, sent to the cell right of the interface.
    pub right_going: ConservedState<T>,
    pub max_speed: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reconstruction {
    /// Piecewise constant cells (first-order Rusanov upwinding).
    FirstOrder,
    /// Piecewise linear cells with minmod-limited slopes.
    #[default]
    Minmod,
    /// Minmod applied to the characteristic variables of each cell.
    Characteristic,
    /// Unlimited centred slopes; not TVD, meant for convergence checks.
    Central,
}

#[inline]
pub fn minmod<T: Real>(a: T, b: T) -> T {
    if a * b <= T::zero() {
        T::zero()
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Limited slope (per unit length) of the middle cell.
#[inline]
pub fn minmod_slope<T: Real>(
    prev: &ConservedState<T>,
    cell: &ConservedState<T>,
    next: &ConservedState<T>,
    dx: T,
) -> ConservedState<T> {
    let inv = T::one() / dx;
    ConservedState(std::array::from_fn(|k| {
        minmod((cell[k] - prev[k]) * inv, (next[k] - cell[k]) * inv)
    }))
}

/// HLL fluctuations for the Riemann problem `(q_l, q_r)`.
pub fn hll_fluctuations<T: Real>(
    eq: &EquationSystem<T>,
    q_left: &ConservedState<T>,
    q_right: &ConservedState<T>,
) -> Result<Fluctuations<T>> {
    let (f_left, c_left) = eq.flux_and_speed(q_left)?;
    let (f_right, c_right) = eq.flux_and_speed(q_right)?;
    Ok(hll_from_parts(
        q_left,
        q_right,
        &f_left,
        &f_right,
        -c_left.max(c_right),
        c_left.max(c_right),
    ))
}

/// HLL splitting from precomputed fluxes and bounding speeds `s1 < s2`.
///
/// The middle state is `q* = (s2 q_r - s1 q_l - Δf)/(s2 - s1)`; the
/// fluctuations are evaluated from `Δq` and `Δf` directly so that identical
/// states give exactly zero.
#[inline]
pub fn hll_from_parts<T: Real>(
    q_left: &ConservedState<T>,
    q_right: &ConservedState<T>,
    f_left: &ConservedState<T>,
    f_right: &ConservedState<T>,
    s1: T,
    s2: T,
) -> Fluctuations<T> {
    let gap = s2 - s1;
    if gap < T::lit(DEGENERATE_SPEED_GAP) {
        return Fluctuations {
            left_going: ConservedState::zero(),
            right_going: ConservedState::zero(),
            max_speed: s2.max(-s1),
        };
    }
    let dq = *q_right - *q_left;
    let df = *f_right - *f_left;
    let inv = T::one() / gap;
    Fluctuations {
        // s1 (q* - q_l) and s2 (q_r - q*)
        left_going: (dq * s2 - df) * (s1 * inv),
        right_going: (df - dq * s1) * (s2 * inv),
        max_speed: s2.max(-s1),
    }
}

/// Per-position scaling of the transport term by the slowing-down operator.
#[derive(Debug, Clone, Copy)]
pub enum SpeedScale<'a, T> {
    /// One factor `s(x)` for every field: `num_cells + 1` interface values
    /// and `num_cells` cell-centre values.
    Scalar { interfaces: &'a [T], centers: &'a [T] },
    /// Per-field factors `s_i(x)`, applied as `R diag(s_i) R⁻¹` to the
    /// fluctuations, which realizes `R diag(s_i λ_i) R⁻¹ ∂_x q`.
    PerField {
        interfaces: &'a [[T; 3]],
        centers: &'a [[T; 3]],
    },
}

/// Scratch buffers reused across right-hand-side evaluations.
#[derive(Debug, Clone, Default)]
pub struct RhsWorkspace<T> {
    edge_left: Vec<ConservedState<T>>,
    edge_right: Vec<ConservedState<T>>,
    flux_left: Vec<ConservedState<T>>,
    flux_right: Vec<ConservedState<T>>,
    speed_left: Vec<T>,
    speed_right: Vec<T>,
}

impl<T: Real> RhsWorkspace<T> {
    fn resize(&mut self, len: usize) {
        let z = ConservedState::zero();
        self.edge_left.resize(len, z);
        self.edge_right.resize(len, z);
        self.flux_left.resize(len, z);
        self.flux_right.resize(len, z);
        self.speed_left.resize(len, T::zero());
        self.speed_right.resize(len, T::zero());
    }
}

/// `dQ_i/dt = -(A⁺Δq_{i-1/2} + A⁻Δq_{i+1/2} + AΔq_i)/Δx` for every interior
/// cell, with `AΔq_i = f(q_i^right) - f(q_i^left)`.
///
/// Ghost cells must already hold boundary data for `field.time`. `out` must
/// have one entry per interior cell.
pub fn semidiscrete_rhs<T: Real>(
    field: &FieldGrid<T>,
    eq: &EquationSystem<T>,
    reconstruction: Reconstruction,
    scale: Option<SpeedScale<'_, T>>,
    workspace: &mut RhsWorkspace<T>,
    out: &mut [ConservedState<T>],
) -> Result<()> {
    let n = field.grid.num_cells;
    let dx = field.grid.dx;
    let cells = &field.cells;
    assert_eq!(out.len(), n, "rhs buffer must cover the interior");
    workspace.resize(cells.len());
    let ws = workspace;

    // edges for ghost -1, interior cells and the first right ghost
    for k in GHOSTS - 1..=GHOSTS + n {
        let q = cells[k];
        let half_slope = match reconstruction {
            Reconstruction::FirstOrder => ConservedState::zero(),
            Reconstruction::Minmod => minmod_slope(&cells[k - 1], &q, &cells[k + 1], dx) * (T::half() * dx),
            Reconstruction::Characteristic => characteristic_half_slope(eq, &cells[k - 1], &q, &cells[k + 1]),
            Reconstruction::Central => (cells[k + 1] - cells[k - 1]) * (T::half() * T::half()),
        };
        let (ql, qr) = (q - half_slope, q + half_slope);
        let edges = eq
            .flux_and_speed(&ql)
            .and_then(|l| eq.flux_and_speed(&qr).map(|r| (l, r)));
        let ((fl, cl), (fr, cr), ql, qr) = match edges {
            Ok((l, r)) => (l, r, ql, qr),
            // limited edge left the admissible set: fall back to first order
            Err(_) => {
                let c = eq.flux_and_speed(&q)?;
                (c, c, q, q)
            }
        };
        ws.edge_left[k] = ql;
        ws.edge_right[k] = qr;
        ws.flux_left[k] = fl;
        ws.flux_right[k] = fr;
        ws.speed_left[k] = cl;
        ws.speed_right[k] = cr;
    }

    let inv_dx = T::one() / dx;
    // interface j sits between storage cells j + GHOSTS - 1 and j + GHOSTS
    let mut incoming = interface_fluctuations(eq, ws, GHOSTS - 1, scale, 0)?;
    for (i, rhs) in out.iter_mut().enumerate() {
        let k = i + GHOSTS;
        let outgoing = interface_fluctuations(eq, ws, k, scale, i + 1)?;
        let mut internal = ws.flux_right[k] - ws.flux_left[k];
        match scale {
            Some(SpeedScale::Scalar { centers, .. }) => internal = internal * centers[i],
            Some(SpeedScale::PerField { centers, .. }) => {
                let s = centers[i];
                if s != [T::one(); 3] {
                    internal = eq.field_matrix(&cells[k], s)?.apply(internal);
                }
            }
            None => {}
        }
        *rhs = -(incoming.right_going + outgoing.left_going + internal) * inv_dx;
        incoming = outgoing;
    }
    Ok(())
}

#[inline]
fn interface_fluctuations<T: Real>(
    eq: &EquationSystem<T>,
    ws: &RhsWorkspace<T>,
    left_cell: usize,
    scale: Option<SpeedScale<'_, T>>,
    interface: usize,
) -> Result<Fluctuations<T>> {
    let right_cell = left_cell + 1;
    let s2 = ws.speed_right[left_cell].max(ws.speed_left[right_cell]);
    let ql = &ws.edge_right[left_cell];
    let qr = &ws.edge_left[right_cell];
    let mut fl = hll_from_parts(ql, qr, &ws.flux_right[left_cell], &ws.flux_left[right_cell], -s2, s2);
    match scale {
        Some(SpeedScale::Scalar { interfaces, .. }) => {
            let s = interfaces[interface];
            fl.left_going = fl.left_going * s;
            fl.right_going = fl.right_going * s;
        }
        Some(SpeedScale::PerField { interfaces, .. }) => {
            let s = interfaces[interface];
            if s != [T::one(); 3] {
                let mid = (*ql + *qr) * T::half();
                let m = eq.field_matrix(&mid, s)?;
                fl.left_going = m.apply(fl.left_going);
                fl.right_going = m.apply(fl.right_going);
            }
        }
        None => {}
    }
    Ok(fl)
}

/// Allocating convenience wrapper around [`semidiscrete_rhs`].
pub fn rhs_vec<T: Real>(
    field: &FieldGrid<T>,
    eq: &EquationSystem<T>,
    reconstruction: Reconstruction,
    scale: Option<SpeedScale<'_, T>>,
) -> Result<Vec<ConservedState<T>>> {
    let mut out = vec![ConservedState::zero(); field.grid.num_cells];
    semidiscrete_rhs(field, eq, reconstruction, scale, &mut RhsWorkspace::default(), &mut out)?;
    Ok(out)
}
