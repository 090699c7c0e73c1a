//! Lagrangian gas dynamics: the nonlinear system in `(V, u, E)` and its
//! linearization about the quiescent far-field state.

use crate::error::{Error, Result};
use crate::linalg::{ConservedState, Mat3};
use crate::scalar::Real;

/// States with specific volume or pressure at or below this value are
/// rejected as vacuum.
pub const VACUUM_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    NonlinearLagrangian,
    LinearizedLagrangian,
}

impl SystemKind {
    pub fn name(self) -> &'static str {
        match self {
            SystemKind::NonlinearLagrangian => "nonlinear",
            SystemKind::LinearizedLagrangian => "linear",
        }
    }
}

/// Flux, closure and characteristic structure of one of the two systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquationSystem<T> {
    pub kind: SystemKind,
    pub gamma: T,
    pub far_field: ConservedState<T>,
}

/// Ordered eigenvalues `λ1 < λ2 = 0 < λ3` and right eigenvectors as the
/// columns of `right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenstructure<T> {
    pub eigenvalues: [T; 3],
    pub right: Mat3<T>,
}

impl<T: Real> EquationSystem<T> {
    /// Nonlinear system with far field `(1, 0, γ/(γ-1))`.
    pub fn nonlinear(gamma: T) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self {
            kind: SystemKind::NonlinearLagrangian,
            gamma,
            far_field: ConservedState::new(T::one(), T::zero(), gamma / (gamma - T::one())),
        })
    }

    /// Linearization about `(1, 0, γ/(γ-1))`; states are perturbations, so
    /// the far field is zero.
    pub fn linearized(gamma: T) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self {
            kind: SystemKind::LinearizedLagrangian,
            gamma,
            far_field: ConservedState::zero(),
        })
    }

    pub fn new(kind: SystemKind, gamma: T) -> Result<Self> {
        match kind {
            SystemKind::NonlinearLagrangian => Self::nonlinear(gamma),
            SystemKind::LinearizedLagrangian => Self::linearized(gamma),
        }
    }

    pub fn is_linear(&self) -> bool {
        self.kind == SystemKind::LinearizedLagrangian
    }

    /// Pressure from the closure relation.
    ///
    /// Nonlinear: `p = (γ-1)(E - u²/2)/V`. Linear: `p = (γ-1)E - γV`, the
    /// second row of the linearized flux matrix.
    pub fn pressure(&self, q: &ConservedState<T>) -> Result<T> {
        let g = self.gamma;
        match self.kind {
            SystemKind::LinearizedLagrangian => {
                let p = (g - T::one()) * q.energy() - g * q.volume();
                if p.is_finite() {
                    Ok(p)
                } else {
                    Err(non_physical("non-finite linear pressure", q))
                }
            }
            SystemKind::NonlinearLagrangian => {
                let v = q.volume();
                if !(v > T::lit(VACUUM_FLOOR)) {
                    return Err(non_physical("specific volume below vacuum floor", q));
                }
                let u = q.velocity();
                let p = (g - T::one()) * (q.energy() - T::half() * u * u) / v;
                if !(p > T::lit(VACUUM_FLOOR)) || !p.is_finite() {
                    return Err(non_physical("pressure below vacuum floor", q));
                }
                Ok(p)
            }
        }
    }

    /// Specific total energy from `(V, u, p)`; inverse of [`Self::pressure`].
    pub fn energy_from(&self, volume: T, velocity: T, pressure: T) -> T {
        let g = self.gamma;
        match self.kind {
            SystemKind::NonlinearLagrangian => pressure * volume / (g - T::one()) + T::half() * velocity * velocity,
            SystemKind::LinearizedLagrangian => (pressure + g * volume) / (g - T::one()),
        }
    }

    /// `f(q) = (-u, p, u p)` or `A q` for the linear system.
    pub fn flux(&self, q: &ConservedState<T>) -> Result<ConservedState<T>> {
        Ok(self.flux_and_speed(q)?.0)
    }

    /// Flux together with the largest characteristic speed `λ3(q)`.
    #[inline]
    pub fn flux_and_speed(&self, q: &ConservedState<T>) -> Result<(ConservedState<T>, T)> {
        let g = self.gamma;
        match self.kind {
            SystemKind::LinearizedLagrangian => {
                let f = ConservedState::new(
                    -q.velocity(),
                    (g - T::one()) * q.energy() - g * q.volume(),
                    g * q.velocity(),
                );
                Ok((f, g))
            }
            SystemKind::NonlinearLagrangian => {
                let p = self.pressure(q)?;
                let u = q.velocity();
                let c = (g * p / q.volume()).sqrt();
                Ok((ConservedState::new(-u, p, u * p), c))
            }
        }
    }

    /// Largest characteristic speed `λ3 = -λ1`.
    #[inline]
    pub fn max_speed(&self, q: &ConservedState<T>) -> Result<T> {
        match self.kind {
            SystemKind::LinearizedLagrangian => Ok(self.gamma),
            SystemKind::NonlinearLagrangian => {
                let p = self.pressure(q)?;
                Ok((self.gamma * p / q.volume()).sqrt())
            }
        }
    }

    pub fn eigenvalues(&self, q: &ConservedState<T>) -> Result<[T; 3]> {
        let c = self.max_speed(q)?;
        Ok([-c, T::zero(), c])
    }

    /// Eigenvalues and (unnormalized) right eigenvectors.
    pub fn eigenstructure(&self, q: &ConservedState<T>) -> Result<Eigenstructure<T>> {
        let g = self.gamma;
        let one = T::one();
        match self.kind {
            SystemKind::LinearizedLagrangian => {
                let r1 = ConservedState::new(-one / g, -one, one);
                let r2 = ConservedState::new((g - one) / g, T::zero(), one);
                let r3 = ConservedState::new(-one / g, one, one);
                Ok(Eigenstructure {
                    eigenvalues: [-g, T::zero(), g],
                    right: Mat3::from_columns([r1, r2, r3]),
                })
            }
            SystemKind::NonlinearLagrangian => {
                let p = self.pressure(q)?;
                let v = q.volume();
                let u = q.velocity();
                let sg = g.sqrt();
                let spv = (p * v).sqrt();
                let a = -(v / p).sqrt();
                let r1 = ConservedState::new(a, -sg, spv - u * sg);
                let r2 = ConservedState::new(g - one, T::zero(), p);
                let r3 = ConservedState::new(a, sg, spv + u * sg);
                let c = (g * p / v).sqrt();
                Ok(Eigenstructure {
                    eigenvalues: [-c, T::zero(), c],
                    right: Mat3::from_columns([r1, r2, r3]),
                })
            }
        }
    }

    /// Flux Jacobian `f'(q)`.
    pub fn jacobian(&self, q: &ConservedState<T>) -> Result<Mat3<T>> {
        let g = self.gamma;
        let one = T::one();
        let zero = T::zero();
        match self.kind {
            SystemKind::LinearizedLagrangian => Ok(Mat3([[zero, -one, zero], [-g, zero, g - one], [zero, g, zero]])),
            SystemKind::NonlinearLagrangian => {
                let p = self.pressure(q)?;
                let v = q.volume();
                let u = q.velocity();
                Ok(Mat3([
                    [zero, -one, zero],
                    [-p / v, u * (one - g) / v, (g - one) / v],
                    [-p * u / v, p + u * u * (one - g) / v, u * (g - one) / v],
                ]))
            }
        }
    }

    /// `R diag(σ) R⁻¹` in closed form.
    ///
    /// This is the building block of the damping and slowing operators and of
    /// the matrix-valued relaxation weight.
    pub fn field_matrix(&self, q: &ConservedState<T>, sigma: [T; 3]) -> Result<Mat3<T>> {
        let g = self.gamma;
        let one = T::one();
        let two = T::two();
        let [s1, s2, s3] = sigma;
        let c1 = s1 - two * s2 + s3;
        let c2 = s1 - s3;
        let c3 = g - one;
        let sum = s1 + s3;
        match self.kind {
            SystemKind::LinearizedLagrangian => Ok(Mat3([
                [
                    (sum + two * c3 * s2) / (two * g),
                    c2 / (two * g),
                    -c3 * c1 / (two * g * g),
                ],
                [T::half() * c2, T::half() * sum, -c3 * c2 / (two * g)],
                [-T::half() * c1, -T::half() * c2, (c3 * sum + two * s2) / (two * g)],
            ])),
            SystemKind::NonlinearLagrangian => {
                let p = self.pressure(q)?;
                let v = q.volume();
                let u = q.velocity();
                let c4 = (g * p * v).sqrt();
                let gp2 = two * g * p;
                Ok(Mat3([
                    [
                        (g * sum - c3 * c1) / (two * g),
                        (c2 * c4 + c3 * c1 * u) / gp2,
                        -c1 * c3 / gp2,
                    ],
                    [
                        c2 * c4 / (two * v * g),
                        (c3 * c2 * u + c4 * sum) / (two * c4),
                        -c2 * c3 / (two * c4),
                    ],
                    [
                        c4 * (g * c2 * u - c1 * c4) / (two * v * g * g),
                        (c1 * c4 * u - c2 * c4 * c4 + c2 * c3 * g * u * u) / (two * c4 * g),
                        (g * sum * c4 - c1 * c4 - c2 * c3 * g * u) / (two * c4 * g),
                    ],
                ]))
            }
        }
    }
}

/// Mathematical entropy `s(q) = ln(p V^γ)/(1-γ)` of the nonlinear system.
pub fn entropy<T: Real>(q: &ConservedState<T>, gamma: T) -> Result<T> {
    let eq = EquationSystem::nonlinear(gamma)?;
    let p = eq.pressure(q)?;
    Ok((p * q.volume().powf(gamma)).ln() / (T::one() - gamma))
}

fn check_gamma<T: Real>(gamma: T) -> Result<()> {
    if gamma > T::one() && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("heat-capacity ratio must exceed 1, got {gamma}")))
    }
}

fn non_physical<T: Real>(what: &str, q: &ConservedState<T>) -> Error {
    Error::NonPhysicalState(format!("{what} at (V, u, E) = ({}, {}, {})", q[0], q[1], q[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn nl() -> EquationSystem<f64> {
        EquationSystem::nonlinear(1.4).unwrap()
    }

    fn lin() -> EquationSystem<f64> {
        EquationSystem::linearized(1.4).unwrap()
    }

    #[test]
    fn pressure_values() {
        assert_abs_diff_eq!(
            nl().pressure(&ConservedState::new(1.0, 0.0, 3.5)).unwrap(),
            1.4,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            nl().pressure(&ConservedState::new(2.0, 0.0, 3.5)).unwrap(),
            0.7,
            epsilon = 1e-14
        );
        assert_eq!(lin().pressure(&ConservedState::zero()).unwrap(), 0.0);
    }

    #[test]
    fn pressure_rejects_vacuum() {
        assert!(matches!(
            nl().pressure(&ConservedState::new(0.0, 0.0, 3.5)),
            Err(Error::NonPhysicalState(_))
        ));
        assert!(matches!(
            nl().pressure(&ConservedState::new(1.0, 3.0, 1.0)),
            Err(Error::NonPhysicalState(_))
        ));
        assert!(matches!(
            nl().pressure(&ConservedState::new(1.0, 0.0, 1e-14)),
            Err(Error::NonPhysicalState(_))
        ));
    }

    #[test]
    fn gamma_must_exceed_one() {
        assert!(EquationSystem::<f64>::nonlinear(1.0).is_err());
        assert!(EquationSystem::<f64>::linearized(0.5).is_err());
    }

    #[test]
    fn far_field_defaults() {
        assert_abs_diff_eq!(nl().far_field[2], 3.5, epsilon = 1e-14);
        assert_eq!(nl().far_field[0], 1.0);
        assert_eq!(nl().far_field[1], 0.0);
        assert_eq!(lin().far_field, ConservedState::zero());
    }

    #[test]
    fn flux_values() {
        let f = nl().flux(&ConservedState::new(1.0, 0.0, 3.5)).unwrap();
        assert_abs_diff_eq!(f[0], 0.0);
        assert_abs_diff_eq!(f[1], 1.4, epsilon = 1e-14);
        assert_abs_diff_eq!(f[2], 0.0);

        let f = lin().flux(&ConservedState::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(f, ConservedState::new(0.0, -1.4, 0.0));

        let f = nl().flux(&ConservedState::new(2.0, 1.0, 3.5)).unwrap();
        assert_abs_diff_eq!(f[0], -1.0);
        assert_abs_diff_eq!(f[1], 0.6, epsilon = 1e-14);
        assert_abs_diff_eq!(f[2], 0.6, epsilon = 1e-14);
    }

    #[test]
    fn eigenvalues_at_far_field_match_linearization() {
        let q = nl().far_field;
        let l = nl().eigenvalues(&q).unwrap();
        assert_abs_diff_eq!(l[0], -1.4, epsilon = 1e-14);
        assert_eq!(l[1], 0.0);
        assert_abs_diff_eq!(l[2], 1.4, epsilon = 1e-14);
        assert_eq!(lin().eigenvalues(&q).unwrap(), [-1.4, 0.0, 1.4]);
    }

    #[test]
    fn linear_eigenvectors_as_printed() {
        let es = lin().eigenstructure(&ConservedState::zero()).unwrap();
        let g = 1.4;
        assert_eq!(es.right.column(0), ConservedState::new(-1.0 / g, -1.0, 1.0));
        assert_eq!(es.right.column(1), ConservedState::new(-(1.0 - g) / g, 0.0, 1.0));
        assert_eq!(es.right.column(2), ConservedState::new(-1.0 / g, 1.0, 1.0));
    }

    #[test]
    fn field_matrix_trivial_sigmas() {
        for eq in [nl(), lin()] {
            let q = ConservedState::new(1.3, 0.2, 4.0);
            let m = eq.field_matrix(&q, [1.0; 3]).unwrap();
            assert!(m.sub(&Mat3::identity()).max_abs() < 1e-13);
            let z = eq.field_matrix(&q, [0.0; 3]).unwrap();
            assert!(z.max_abs() < 1e-15);
        }
    }

    #[test]
    fn entropy_values() {
        let s = entropy(&ConservedState::new(1.0, 0.0, 3.5), 1.4).unwrap();
        assert_abs_diff_eq!(s, (1.4f64).ln() / -0.4, epsilon = 1e-13);
        assert_abs_diff_eq!(s, -0.841180, epsilon = 1e-6);
        let s = entropy(&ConservedState::new(2.0, 0.0, 3.5), 1.4).unwrap();
        // p = 0.7, p V^γ = 0.7·2^1.4
        assert_abs_diff_eq!(s, -1.5343278, epsilon = 1e-6);
        // p V^γ = 1 at V = 1 requires p = 1, i.e. E = 1/(γ-1)
        let s = entropy(&ConservedState::new(1.0, 0.0, 2.5), 1.4).unwrap();
        assert_abs_diff_eq!(s, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn closure_roundtrip() {
        let eq = nl();
        let (v, u, p) = (0.7, -0.3, 2.1);
        let q = ConservedState::new(v, u, eq.energy_from(v, u, p));
        assert_abs_diff_eq!(eq.pressure(&q).unwrap(), p, epsilon = 1e-14);
        let eq = lin();
        let q = ConservedState::new(v, u, eq.energy_from(v, u, p));
        assert_abs_diff_eq!(eq.pressure(&q).unwrap(), p, epsilon = 1e-14);
    }

    #[test]
    fn works_in_single_precision() {
        let eq = EquationSystem::<f32>::nonlinear(1.4).unwrap();
        let c = eq.max_speed(&eq.far_field).unwrap();
        assert!((c - 1.4).abs() < 1e-6);
    }
}
