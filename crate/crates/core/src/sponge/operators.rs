//! Far-field source terms: local damping (SDO, S-SDO) and the nonlocal
//! damping operator (NDO).

use crate::equations::EquationSystem;
use crate::error::Result;
use crate::grid::{FieldGrid, GHOSTS};
use crate::linalg::{ConservedState, Mat3};
use crate::riemann::minmod_slope;
use crate::scalar::Real;

use super::config::SpongeConfig;

/// Add `-R diag(d_i s_i |λ_i|) R⁻¹ (q - q̄)` to `out`, with the eigenstructure
/// taken at each cell average.
pub fn add_sdo_source<T: Real>(
    eq: &EquationSystem<T>,
    cells: &[ConservedState<T>],
    damping: &[[T; 3]],
    slowing: &[[T; 3]],
    out: &mut [ConservedState<T>],
) -> Result<()> {
    for (((q, d), s), o) in cells.iter().zip(damping).zip(slowing).zip(out.iter_mut()) {
        if d.iter().all(|&di| di == T::zero()) {
            continue;
        }
        let lambda = eq.eigenvalues(q)?;
        let rates = std::array::from_fn(|i| d[i] * s[i] * lambda[i].abs());
        *o -= eq.field_matrix(q, rates)?.apply(*q - eq.far_field);
    }
    Ok(())
}

/// Add `-d s (q - q̄)` componentwise.
pub fn add_ssdo_source<T: Real>(
    far: ConservedState<T>,
    cells: &[ConservedState<T>],
    damping: &[T],
    slowing: &[T],
    out: &mut [ConservedState<T>],
) {
    for (((q, &d), &s), o) in cells.iter().zip(damping).zip(slowing).zip(out.iter_mut()) {
        if d != T::zero() {
            *o -= (*q - far) * (d * s);
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct NdoWorkspace<T> {
    slopes: Vec<ConservedState<T>>,
    full: Vec<ConservedState<T>>,
    half: Vec<ConservedState<T>>,
    jump: Vec<ConservedState<T>>,
}

/// `M_D(z, q) = R diag(d_i(z) |λ_i(q)|) R⁻¹`.
fn damping_matrix<T: Real>(
    eq: &EquationSystem<T>,
    config: &SpongeConfig<T>,
    z: T,
    q: &ConservedState<T>,
) -> Result<Mat3<T>> {
    let d = config.damping_rates(z);
    if d.iter().all(|&di| di == T::zero()) {
        return Ok(Mat3::zero());
    }
    let lambda = eq.eigenvalues(q)?;
    eq.field_matrix(q, std::array::from_fn(|i| d[i] * lambda[i].abs()))
}

/// Add the nonlocal damping term `∫_x^{x∞} M_D(z, q) ∂_z q dz` at the centers
/// of the sponge cells.
///
/// The state is piecewise affine (cell average plus minmod slope) and equal
/// to `q̄` beyond the last cell. In-cell pieces use Simpson's rule; each jump
/// at an interface is integrated along the straight segment between the two
/// one-sided values with the midpoint rule. Cells left of the sponge receive
/// nothing. Ghost cells must be filled.
pub fn add_ndo_source<T: Real>(
    field: &FieldGrid<T>,
    eq: &EquationSystem<T>,
    config: &SpongeConfig<T>,
    work: &mut NdoWorkspace<T>,
    out: &mut [ConservedState<T>],
) -> Result<()> {
    let grid = field.grid;
    let n = grid.num_cells;
    let dx = grid.dx;
    let first = (0..n).find(|&i| grid.center(i) >= config.geometry.x_start).unwrap_or(n);
    if first == n {
        return Ok(());
    }
    // affine pieces for the sponge cells
    let cells = &field.cells;
    work.slopes.clear();
    for i in first..n {
        let k = i + GHOSTS;
        let slope = minmod_slope(&cells[k - 1], &cells[k], &cells[k + 1], dx);
        let h = slope * (dx * T::half());
        let ok = eq.pressure(&(cells[k] - h)).is_ok() && eq.pressure(&(cells[k] + h)).is_ok();
        work.slopes.push(if ok { slope } else { ConservedState::zero() });
    }
    let m = n - first;
    work.full.clear();
    work.half.clear();
    work.jump.clear();
    let sixth = dx / T::lit(6.0);
    let twelfth = dx / T::lit(12.0);
    let four = T::lit(4.0);
    let quarter = dx * T::lit(0.25);
    for j in 0..m {
        let i = first + j;
        let q = cells[i + GHOSTS];
        let slope = work.slopes[j];
        let x = grid.center(i);
        let (xl, xr) = (x - dx * T::half(), x + dx * T::half());
        let (ql, qr) = (q - slope * (dx * T::half()), q + slope * (dx * T::half()));
        let mc = damping_matrix(eq, config, x, &q)?;
        let mr = damping_matrix(eq, config, xr, &qr)?;
        let ml = damping_matrix(eq, config, xl, &ql)?;
        let mq = damping_matrix(eq, config, x + quarter, &(q + slope * quarter))?;
        let full = ml.apply(slope) + mc.apply(slope) * four + mr.apply(slope);
        work.full.push(full * sixth);
        let half = mc.apply(slope) + mq.apply(slope) * four + mr.apply(slope);
        work.half.push(half * twelfth);

        let q_plus = if i + 1 < n {
            let next = cells[i + 1 + GHOSTS];
            next - work.slopes[j + 1] * (dx * T::half())
        } else {
            eq.far_field
        };
        let mid = (qr + q_plus) * T::half();
        let mj = damping_matrix(eq, config, xr, &mid)?;
        work.jump.push(mj.apply(q_plus - qr));
    }
    // right-to-left suffix sum: S_j = half_j + jump_j + Σ_{i>j} (full_i + jump_i)
    let mut tail = ConservedState::zero();
    for j in (0..m).rev() {
        out[first + j] += work.half[j] + work.jump[j] + tail;
        tail += work.full[j] + work.jump[j];
    }
    Ok(())
}
