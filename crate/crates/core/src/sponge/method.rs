use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Absorbing boundary treatment at the right end of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AbcMethod {
    /// Far-field state imposed in the ghost cells, no sponge.
    None,
    /// Zeroth-order extrapolation into the ghost cells, no sponge.
    Extrapolation,
    /// Scalar relaxation after every time step.
    Rm,
    /// Directional (matrix-valued) relaxation after every time step.
    RmM,
    /// Scalar relaxation before and after every step.
    Rm2,
    /// Directional relaxation before and after every step.
    RmM2,
    /// Scalar relaxation after every Runge-Kutta stage.
    RmRk,
    /// Directional relaxation after every Runge-Kutta stage.
    RmMRk,
    /// Per-field slowing-down and damping operators.
    Sdo,
    /// Scalar slowing-down and damping operators.
    SSdo,
    /// Nonlocal damping operator.
    Ndo,
}

impl AbcMethod {
    pub const ALL: [AbcMethod; 11] = [
        AbcMethod::None,
        AbcMethod::Extrapolation,
        AbcMethod::Rm,
        AbcMethod::RmM,
        AbcMethod::Rm2,
        AbcMethod::RmM2,
        AbcMethod::RmRk,
        AbcMethod::RmMRk,
        AbcMethod::Sdo,
        AbcMethod::SSdo,
        AbcMethod::Ndo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AbcMethod::None => "None",
            AbcMethod::Extrapolation => "Extrapolation",
            AbcMethod::Rm => "RM",
            AbcMethod::RmM => "RM-M",
            AbcMethod::Rm2 => "RM2",
            AbcMethod::RmM2 => "RM-M2",
            AbcMethod::RmRk => "RM-RK",
            AbcMethod::RmMRk => "RM-M-RK",
            AbcMethod::Sdo => "SDO",
            AbcMethod::SSdo => "S-SDO",
            AbcMethod::Ndo => "NDO",
        }
    }

    /// Whether the method needs a sponge layer at all.
    pub fn uses_sponge(self) -> bool {
        !matches!(self, AbcMethod::None | AbcMethod::Extrapolation)
    }

    pub fn is_relaxation(self) -> bool {
        matches!(
            self,
            AbcMethod::Rm | AbcMethod::RmM | AbcMethod::Rm2 | AbcMethod::RmM2 | AbcMethod::RmRk | AbcMethod::RmMRk
        )
    }

    /// Relaxation through `R diag(Γ_i) R⁻¹` rather than a scalar weight.
    pub fn is_directional(self) -> bool {
        matches!(
            self,
            AbcMethod::RmM | AbcMethod::RmM2 | AbcMethod::RmMRk | AbcMethod::Sdo
        )
    }
}

impl fmt::Display for AbcMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AbcMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let key: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        AbcMethod::ALL
            .into_iter()
            .find(|m| m.name().replace('-', "").to_ascii_lowercase() == key)
            .ok_or_else(|| Error::Config(format!("unknown method '{s}'")))
    }
}
