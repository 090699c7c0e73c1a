//! Floating-point abstraction shared by every numerical kernel.

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};

/// Real scalar type the solver is generic over.
///
/// Implemented for `f32` and `f64`. Literal constants go through [`Real::lit`]
/// so formulas read close to their textbook form.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    #[inline(always)]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline(always)]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline(always)]
    fn two() -> Self {
        Self::lit(2.0)
    }

    /// Lossy conversion back to `f64` for diagnostics and output.
    #[inline(always)]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
