use crate::error::{Error, Result};
use crate::grid::SpongeGeometry;
use crate::scalar::Real;

use super::method::AbcMethod;
use super::profile::ProfileKind;

/// Sponge-layer parameters shared by all absorbing methods.
///
/// Per-field arrays are indexed by characteristic field: 0 is left-going,
/// 1 the contact, 2 right-going. Scalar methods (S-SDO) read entry 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpongeConfig<T> {
    pub geometry: SpongeGeometry<T>,
    /// Damping rate `d_i = σ_i (1 - Γ_d)`.
    pub damping_profile: ProfileKind<T>,
    /// Slowing factor `s_i = Γ_s` where slowing is switched on.
    pub slowing_profile: ProfileKind<T>,
    /// Maximum damping rates; a zero entry leaves that field undamped.
    pub sigma: [T; 3],
    /// Fields whose speed is scaled by `Γ_s`; the others keep `s_i ≡ 1`.
    pub slowing: [bool; 3],
    /// Weight function of the relaxation methods.
    pub relax_profile: ProfileKind<T>,
    pub relax_fields: [bool; 3],
    /// The relaxation weight is `Γ^relax_power`.
    pub relax_power: i32,
}

impl<T: Real> SpongeConfig<T> {
    /// Settings used for `method` unless overridden.
    pub fn defaults_for(method: AbcMethod, geometry: SpongeGeometry<T>) -> Self {
        let b = ProfileKind::GammaB { b: T::half() };
        let right_only = [false, false, true];
        let mut c = Self {
            geometry,
            damping_profile: ProfileKind::GammaA,
            slowing_profile: b,
            sigma: [T::zero(); 3],
            slowing: [false; 3],
            relax_profile: b,
            relax_fields: [true; 3],
            relax_power: 1,
        };
        let thirty = T::lit(30.0);
        match method {
            AbcMethod::Sdo => {
                c.sigma = [T::zero(), T::zero(), thirty];
                c.slowing = right_only;
            }
            AbcMethod::SSdo => c.sigma = [thirty; 3],
            AbcMethod::Ndo => {
                c.damping_profile = b;
                c.sigma = [T::zero(), T::zero(), T::lit(20.0)];
            }
            AbcMethod::RmM | AbcMethod::RmMRk => c.relax_fields = right_only,
            AbcMethod::RmM2 => {
                c.relax_fields = right_only;
                c.relax_power = 2;
            }
            AbcMethod::Rm2 => c.relax_power = 2,
            AbcMethod::Rm | AbcMethod::RmRk | AbcMethod::None | AbcMethod::Extrapolation => {}
        }
        c
    }

    pub fn validate(&self) -> Result<()> {
        if self.sigma.iter().any(|s| !(*s >= T::zero()) || !s.is_finite()) {
            return Err(Error::Config("damping rates must be finite and >= 0".into()));
        }
        if self.relax_power < 1 {
            return Err(Error::Config("relaxation power must be >= 1".into()));
        }
        Ok(())
    }

    pub fn damping_rates(&self, x: T) -> [T; 3] {
        let ramp = T::one() - self.damping_profile.at(x, &self.geometry);
        self.sigma.map(|s| s * ramp)
    }

    pub fn slowing_factors(&self, x: T) -> [T; 3] {
        let g = self.slowing_profile.at(x, &self.geometry);
        self.slowing.map(|on| if on { g } else { T::one() })
    }

    /// Scalar damping rate used by S-SDO.
    pub fn scalar_damping(&self, x: T) -> T {
        self.damping_rates(x)[2]
    }

    /// Scalar slowing factor used by S-SDO.
    pub fn scalar_slowing(&self, x: T) -> T {
        self.slowing_factors(x)[2]
    }

    /// Relaxation weights `Γ_i(x)`; unselected fields get 1.
    pub fn relax_weights(&self, x: T) -> [T; 3] {
        let g = self.relax_profile.at(x, &self.geometry).powi(self.relax_power);
        self.relax_fields.map(|on| if on { g } else { T::one() })
    }
}
