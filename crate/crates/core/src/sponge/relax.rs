//! Relaxation towards the far-field state.

use crate::equations::EquationSystem;
use crate::error::{Error, Result};
use crate::linalg::ConservedState;
use crate::scalar::Real;

/// `q ← Γ q + (1-Γ) q̄` cell by cell.
pub fn relax_scalar<T: Real>(cells: &mut [ConservedState<T>], weights: &[T], far: ConservedState<T>) {
    for (q, &g) in cells.iter_mut().zip(weights) {
        if g != T::one() {
            *q = *q * g + far * (T::one() - g);
        }
    }
}

/// `q ← 𝚪 q + (I-𝚪) q̄` with `𝚪 = R diag(Γ_i) R⁻¹` evaluated at `q`.
///
/// `(I-𝚪) = R diag(1-Γ_i) R⁻¹`, so the update is `q - R diag(1-Γ_i) R⁻¹ (q - q̄)`.
pub fn relax_matrix<T: Real>(
    cells: &mut [ConservedState<T>],
    weights: &[[T; 3]],
    far: ConservedState<T>,
    eq: &EquationSystem<T>,
) -> Result<()> {
    for (q, g) in cells.iter_mut().zip(weights) {
        if *g == [T::one(); 3] {
            continue;
        }
        let m = eq.field_matrix(q, g.map(|gi| T::one() - gi))?;
        *q = *q - m.apply(*q - far);
    }
    Ok(())
}

/// Effective damping rates of a relaxation step with weight `Γ`:
/// the first-order rate `(1-Γ)/(Δt|λ|)` and the exact rate `-ln Γ/(Δt|λ|)`.
pub fn rm_damping_rates<T: Real>(gamma: T, dt: T, lambda: T) -> Result<(T, T)> {
    if lambda == T::zero() || !(dt > T::zero()) {
        return Err(Error::Domain(format!(
            "damping rate needs a nonzero speed and positive step, got λ = {lambda}, Δt = {dt}"
        )));
    }
    if !(gamma > T::zero() && gamma <= T::one()) {
        return Err(Error::Domain(format!(
            "relaxation weight must lie in (0, 1], got {gamma}"
        )));
    }
    let scale = dt * lambda.abs();
    Ok(((T::one() - gamma) / scale, -gamma.ln() / scale))
}
