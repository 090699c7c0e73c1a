//! Flat `key = value` run configuration and the command-line overrides.

use std::collections::HashSet;
use std::f64::consts::PI;

use sponge_core::diagnostics::reference::PistonProblem;
use sponge_core::experiment::{CaseSpec, SpongeOverrides};
use sponge_core::riemann::Reconstruction;
use sponge_core::sponge::{AbcMethod, ProfileKind};
use sponge_core::SystemKind;

use crate::error::CliError;

pub fn parse_equation(text: &str) -> Result<SystemKind, CliError> {
    match text.trim().to_ascii_lowercase().as_str() {
        "linear" | "linearized" | "lin" => Ok(SystemKind::LinearizedLagrangian),
        "nonlinear" | "non" => Ok(SystemKind::NonlinearLagrangian),
        other => Err(CliError::Config(format!(
            "unknown equation '{other}' (linear or nonlinear)"
        ))),
    }
}

pub fn equation_name(kind: SystemKind) -> &'static str {
    match kind {
        SystemKind::LinearizedLagrangian => "linear",
        SystemKind::NonlinearLagrangian => "nonlinear",
    }
}

pub fn parse_method(text: &str) -> Result<AbcMethod, CliError> {
    text.parse()
        .map_err(|e: sponge_core::Error| CliError::Config(e.to_string()))
}

pub fn parse_profile(text: &str) -> Result<ProfileKind<f64>, CliError> {
    ProfileKind::parse(text).map_err(|e| CliError::Config(e.to_string()))
}

pub fn parse_reconstruction(text: &str) -> Result<Reconstruction, CliError> {
    match text.trim().to_ascii_lowercase().replace('_', "-").as_str() {
        "first-order" => Ok(Reconstruction::FirstOrder),
        "minmod" => Ok(Reconstruction::Minmod),
        "characteristic" => Ok(Reconstruction::Characteristic),
        "central" => Ok(Reconstruction::Central),
        other => Err(CliError::Config(format!(
            "unknown reconstruction '{other}' (first-order, minmod, characteristic, central)"
        ))),
    }
}

pub fn reconstruction_name(r: Reconstruction) -> &'static str {
    match r {
        Reconstruction::FirstOrder => "first-order",
        Reconstruction::Minmod => "minmod",
        Reconstruction::Characteristic => "characteristic",
        Reconstruction::Central => "central",
    }
}

fn parse_term(t: &str) -> Option<f64> {
    if t == "pi" {
        return Some(PI);
    }
    if let Some(k) = t.strip_suffix("pi") {
        return k.strip_suffix('*').unwrap_or(k).parse::<f64>().ok().map(|k| k * PI);
    }
    t.parse().ok()
}

/// A number, optionally a multiple of `pi` and/or a fraction: `0.4`,
/// `1/8`, `40pi`, `40*pi`, `pi/5`.
pub fn parse_real(text: &str) -> Result<f64, CliError> {
    let t: String = text
        .trim()
        .to_ascii_lowercase()
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    let value = match t.split_once('/') {
        Some((num, den)) => parse_term(num).zip(parse_term(den)).map(|(a, b)| a / b),
        None => parse_term(&t),
    };
    match value {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::Config(format!("'{text}' is not a number"))),
    }
}

fn parse_usize(text: &str) -> Result<usize, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("'{text}' is not a non-negative integer")))
}

fn parse_triple<T>(text: &str, item: impl Fn(&str) -> Result<T, CliError>) -> Result<[T; 3], CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "'{text}' needs three comma-separated entries"
        )));
    }
    Ok([item(parts[0])?, item(parts[1])?, item(parts[2])?])
}

fn parse_flag(text: &str) -> Result<bool, CliError> {
    match text.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        other => Err(CliError::Config(format!("'{other}' is not a boolean"))),
    }
}

/// Values given on the command line; they win over the config file or preset.
#[derive(Debug, Clone, Default)]
pub struct FlagOverrides {
    pub n: Option<usize>,
    pub omega_over_l: Option<f64>,
    pub method: Option<AbcMethod>,
    pub sigma: Option<f64>,
    pub profile: Option<ProfileKind<f64>>,
    pub equation: Option<SystemKind>,
}

/// Apply `--profile` to the profile that shapes `method`'s absorption:
/// the relaxation weight for the relaxation methods, the damping function
/// otherwise.
pub fn apply_profile(overrides: &mut SpongeOverrides, method: AbcMethod, profile: ProfileKind<f64>) {
    if method.is_relaxation() {
        overrides.relax_profile = Some(profile);
    } else {
        overrides.damping_profile = Some(profile);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub equation: SystemKind,
    pub n: usize,
    pub omega_over_l: f64,
    pub method: AbcMethod,
    pub amplitude: f64,
    pub gamma: f64,
    pub courant: f64,
    pub t_final: f64,
    pub cadence: f64,
    pub x_start: f64,
    pub reconstruction: Reconstruction,
    pub overrides: SpongeOverrides,
    /// Cells per wavelength of the fine reference for the discretization error.
    pub fine_n: Option<usize>,
    /// Write every k-th output state; 0 disables snapshots.
    pub snapshot_every: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = PistonProblem::new(SystemKind::NonlinearLagrangian, 250);
        Self {
            equation: p.kind,
            n: p.cells_per_wavelength,
            omega_over_l: 1.0,
            method: AbcMethod::Sdo,
            amplitude: p.amplitude,
            gamma: p.gamma,
            courant: p.courant,
            t_final: p.t_final,
            cadence: p.cadence,
            x_start: p.x_start,
            reconstruction: p.reconstruction,
            overrides: SpongeOverrides::default(),
            fine_n: None,
            snapshot_every: 0,
        }
    }
}

pub const KEYS: [&str; 22] = [
    "equation",
    "n",
    "omega_over_l",
    "method",
    "amplitude",
    "gamma",
    "courant",
    "t_final",
    "cadence",
    "x_start",
    "reconstruction",
    "sigma",
    "sigma_fields",
    "damping_profile",
    "slowing_profile",
    "slowing",
    "relax_profile",
    "relax_fields",
    "relax_power",
    "profile",
    "fine_n",
    "snapshot_every",
];

impl RunConfig {
    /// Parse the `key = value` format; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut c = RunConfig::default();
        let mut seen = HashSet::new();
        let mut profile = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: CliError| CliError::Config(format!("line {}: {}", lineno + 1, e.message()));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(CliError::Config(format!("expected key = value, got '{line}'"))))?;
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            if !seen.insert(key.clone()) {
                return Err(at(CliError::Config(format!("duplicate key '{key}'"))));
            }
            c.set(&key, value, &mut profile).map_err(at)?;
        }
        if let Some(p) = profile {
            apply_profile(&mut c.overrides, c.method, p);
        }
        Ok(c)
    }

    fn set(&mut self, key: &str, value: &str, profile: &mut Option<ProfileKind<f64>>) -> Result<(), CliError> {
        let o = &mut self.overrides;
        match key {
            "equation" => self.equation = parse_equation(value)?,
            "n" => self.n = parse_usize(value)?,
            "omega_over_l" => self.omega_over_l = parse_real(value)?,
            "method" => self.method = parse_method(value)?,
            "amplitude" => self.amplitude = parse_real(value)?,
            "gamma" => self.gamma = parse_real(value)?,
            "courant" => self.courant = parse_real(value)?,
            "t_final" => self.t_final = parse_real(value)?,
            "cadence" => self.cadence = parse_real(value)?,
            "x_start" => self.x_start = parse_real(value)?,
            "reconstruction" => self.reconstruction = parse_reconstruction(value)?,
            "sigma" => o.sigma = Some(parse_real(value)?),
            "sigma_fields" => o.sigma_fields = Some(parse_triple(value, parse_real)?),
            "damping_profile" => o.damping_profile = Some(parse_profile(value)?),
            "slowing_profile" => o.slowing_profile = Some(parse_profile(value)?),
            "slowing" => o.slowing = Some(parse_triple(value, parse_flag)?),
            "relax_profile" => o.relax_profile = Some(parse_profile(value)?),
            "relax_fields" => o.relax_fields = Some(parse_triple(value, parse_flag)?),
            "relax_power" => {
                o.relax_power = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|_| CliError::Config(format!("'{value}' is not an integer")))?,
                )
            }
            "profile" => *profile = Some(parse_profile(value)?),
            "fine_n" => self.fine_n = Some(parse_usize(value)?).filter(|&n| n > 0),
            "snapshot_every" => self.snapshot_every = parse_usize(value)?,
            other => {
                return Err(CliError::Config(format!(
                    "unknown key '{other}' (known: {})",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    pub fn apply_flags(&mut self, flags: &FlagOverrides) {
        if let Some(n) = flags.n {
            self.n = n;
        }
        if let Some(w) = flags.omega_over_l {
            self.omega_over_l = w;
        }
        if let Some(m) = flags.method {
            self.method = m;
        }
        if let Some(s) = flags.sigma {
            self.overrides.sigma = Some(s);
        }
        if let Some(p) = flags.profile {
            apply_profile(&mut self.overrides, self.method, p);
        }
        if let Some(e) = flags.equation {
            self.equation = e;
        }
    }

    pub fn problem(&self) -> PistonProblem {
        let mut p = PistonProblem::new(self.equation, self.n);
        p.gamma = self.gamma;
        p.amplitude = self.amplitude;
        p.x_start = self.x_start;
        p.t_final = self.t_final;
        p.cadence = self.cadence;
        p.courant = self.courant;
        p.reconstruction = self.reconstruction;
        p
    }

    /// The case this configuration describes, checked for consistency.
    pub fn spec(&self) -> Result<CaseSpec, CliError> {
        if !(self.courant > 0.0 && self.courant <= 1.0) {
            return Err(CliError::Config(format!(
                "courant must lie in (0, 1], got {}",
                self.courant
            )));
        }
        if !(self.t_final > 0.0) || !(self.cadence > 0.0) {
            return Err(CliError::Config("t_final and cadence must be positive".into()));
        }
        if !(self.omega_over_l >= 0.0) {
            return Err(CliError::Config("omega_over_l must be >= 0".into()));
        }
        if let Some(f) = self.fine_n {
            if f % self.n != 0 {
                return Err(CliError::Config(format!(
                    "fine_n = {f} is not a multiple of n = {}",
                    self.n
                )));
            }
        }
        let mut spec = CaseSpec::new(self.problem(), self.method, self.omega_over_l);
        spec.overrides = self.overrides;
        check_spec(&spec)?;
        Ok(spec)
    }
}

/// Catch geometry and parameter errors before any time is spent running.
pub fn check_spec(spec: &CaseSpec) -> Result<(), CliError> {
    spec.problem.equations()?;
    spec.problem.piston()?;
    spec.layout()?;
    spec.abc()?;
    Ok(())
}
