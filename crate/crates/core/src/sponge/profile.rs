//! Weight functions on the sponge layer.

use std::fmt;

use crate::error::{Error, Result};
use crate::grid::SpongeGeometry;
use crate::scalar::Real;

/// Normalized sponge coordinate, clamped to `[0, 1]`.
pub fn phi<T: Real>(x: T, geometry: &SpongeGeometry<T>) -> T {
    ((x - geometry.x_start) / geometry.width()).max(T::zero()).min(T::one())
}

/// Cubic with zero slope at the sponge start: `-2(1-φ)³ + 3(1-φ)²`.
pub fn gamma_a<T: Real>(phi: T) -> T {
    let r = T::one() - phi;
    r * r * (T::lit(3.0) - T::two() * r)
}

/// `1 - [b φ³ + (1-b) φ⁶]`.
pub fn gamma_b<T: Real>(phi: T, b: T) -> T {
    let p3 = phi * phi * phi;
    T::one() - (b * p3 + (T::one() - b) * p3 * p3)
}

/// A weight function falling from 1 at the sponge start to 0 at its end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind<T> {
    GammaA,
    GammaB { b: T },
}

impl<T: Real> ProfileKind<T> {
    pub fn gamma_b(b: T) -> Result<Self> {
        if !(b >= T::zero() && b <= T::one()) {
            return Err(Error::Config(format!(
                "profile parameter b must lie in [0, 1], got {b}"
            )));
        }
        Ok(ProfileKind::GammaB { b })
    }

    /// Value at normalized coordinate `φ ∈ [0, 1]`.
    pub fn at_phi(&self, phi: T) -> T {
        match *self {
            ProfileKind::GammaA => gamma_a(phi),
            ProfileKind::GammaB { b } => gamma_b(phi, b),
        }
    }

    pub fn at(&self, x: T, geometry: &SpongeGeometry<T>) -> T {
        self.at_phi(phi(x, geometry))
    }

    /// Short label used in configuration files and CSV output.
    pub fn label(&self) -> String {
        match self {
            ProfileKind::GammaA => "A".to_string(),
            ProfileKind::GammaB { b } => format!("B({b})"),
        }
    }

    /// Parse `A`, `B` (with `b = 1/2`) or `B(<b>)`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        match t {
            "A" | "a" | "gamma_a" => return Ok(ProfileKind::GammaA),
            "B" | "b" | "gamma_b" => return Self::gamma_b(T::half()),
            _ => {}
        }
        let inner = t
            .strip_prefix("B(")
            .or_else(|| t.strip_prefix("b("))
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Config(format!("unknown profile '{t}'")))?;
        let b: f64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad profile parameter in '{t}'")))?;
        Self::gamma_b(T::lit(b))
    }
}

impl<T: Real> fmt::Display for ProfileKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn geom() -> SpongeGeometry<f64> {
        SpongeGeometry::new(2.0, 6.0).unwrap()
    }

    #[test]
    fn phi_ramp() {
        let g = geom();
        assert_eq!(phi(1.0, &g), 0.0);
        assert_eq!(phi(2.0, &g), 0.0);
        assert_eq!(phi(4.0, &g), 0.5);
        assert_eq!(phi(6.0, &g), 1.0);
        assert_eq!(phi(9.0, &g), 1.0);
    }

    #[test]
    fn midpoint_values() {
        assert_abs_diff_eq!(gamma_a(0.5), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(gamma_b(0.5, 0.5), 0.9296875, epsilon = 1e-15);
    }

    #[test]
    fn endpoints() {
        for kind in [
            ProfileKind::GammaA,
            ProfileKind::GammaB { b: 0.5 },
            ProfileKind::GammaB { b: 0.0 },
        ] {
            assert_eq!(kind.at_phi(0.0), 1.0);
            assert_abs_diff_eq!(kind.at_phi(1.0), 0.0, epsilon = 1e-15);
        }
        // flat start of the cubic
        let h: f64 = 1e-6;
        assert!((gamma_a(h) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn parse_labels() {
        assert_eq!(ProfileKind::<f64>::parse("A").unwrap(), ProfileKind::GammaA);
        assert_eq!(ProfileKind::<f64>::parse("B").unwrap(), ProfileKind::GammaB { b: 0.5 });
        assert_eq!(
            ProfileKind::<f64>::parse("B(0.25)").unwrap(),
            ProfileKind::GammaB { b: 0.25 }
        );
        assert!(ProfileKind::<f64>::parse("B(2)").is_err());
        assert!(ProfileKind::<f64>::parse("C").is_err());
        let k = ProfileKind::<f64>::GammaB { b: 0.3 };
        assert_eq!(ProfileKind::<f64>::parse(&k.label()).unwrap(), k);
    }

    proptest! {
        #[test]
        fn profiles_decrease(a in 0.001f64..0.999, b in 0.0f64..1.0) {
            let eps = 1e-3;
            let lo = a.min(1.0 - eps);
            prop_assert!(gamma_a(lo + eps) < gamma_a(lo));
            prop_assert!(gamma_b(lo + eps, b) < gamma_b(lo, b));
            prop_assert!((0.0..=1.0).contains(&gamma_a(a)));
            prop_assert!((0.0..=1.0).contains(&gamma_b(a, b)));
        }
    }
}
