//! CSV writers. Every file carries `schema_version`; wall-clock times go to
//! separate `*_timing.csv` files so the others are reproducible byte for byte.

use std::path::Path;

use csv::Writer;
use sponge_core::experiment::{CaseReport, CaseSpec};

use crate::config::{equation_name, reconstruction_name};
use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";

pub const RUNS_HEADER: [&str; 18] = [
    "schema_version",
    "preset",
    "column",
    "equation",
    "n",
    "omega_over_l",
    "method",
    "sigma",
    "damping_profile",
    "slowing_profile",
    "slowing",
    "relax_profile",
    "relax_power",
    "reconstruction",
    "status",
    "e_abc",
    "end_time",
    "steps",
];

pub const TIMING_HEADER: [&str; 9] = [
    "schema_version",
    "preset",
    "column",
    "equation",
    "n",
    "omega_over_l",
    "method",
    "runtime_s",
    "steps",
];

pub const E_NUM_HEADER: [&str; 5] = ["schema_version", "equation", "n", "fine_n", "e_num"];

pub const REFLECTION_HEADER: [&str; 11] = [
    "schema_version",
    "study",
    "method",
    "n",
    "omega_over_l",
    "dx",
    "sigma",
    "status",
    "theory",
    "numerical",
    "wall",
];

pub const ENTROPY_HEADER: [&str; 3] = ["schema_version", "t", "entropy"];

pub const ENTROPY_SUMMARY_HEADER: [&str; 7] = [
    "schema_version",
    "run",
    "n",
    "omega_over_l",
    "status",
    "max_increment",
    "net_change",
];

pub const SNAPSHOT_HEADER: [&str; 7] = ["schema_version", "t", "x", "V", "u", "E", "p"];

/// Leading columns of the pivot table; one E_ABC column per series follows.
pub const PIVOT_LEADING: [&str; 2] = ["schema_version", "omega_over_l"];

/// Shortest round-trip form; exponent notation outside `[1e-4, 1e15)`.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn bits(flags: [bool; 3]) -> String {
    flags.map(|b| if b { "1" } else { "0" }).join("")
}

pub struct Table {
    writer: Writer<std::fs::File>,
}

impl Table {
    pub fn create(path: &Path, header: &[&str]) -> Result<Self, CliError> {
        let mut writer = Writer::from_path(path)?;
        writer.write_record(header)?;
        Ok(Self { writer })
    }

    /// Write one row; `schema_version` is prepended.
    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut record = vec![SCHEMA_VERSION.to_string()];
        record.extend(fields.into_iter().map(Into::into));
        self.writer.write_record(&record)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.writer.flush()?;
        Ok(())
    }
}

/// Run description shared by the run and timing tables.
fn identity(preset: &str, column: &str, spec: &CaseSpec) -> Vec<String> {
    vec![
        preset.into(),
        column.into(),
        equation_name(spec.problem.kind).into(),
        spec.problem.cells_per_wavelength.to_string(),
        num(spec.omega_over_l),
        spec.method.name().into(),
    ]
}

pub fn run_row(preset: &str, column: &str, r: &CaseReport) -> Result<Vec<String>, CliError> {
    let mut row = identity(preset, column, &r.spec);
    match r.spec.sponge_config()? {
        Some(c) => row.extend([
            num(c.sigma.iter().fold(0.0, |a: f64, &b| a.max(b))),
            c.damping_profile.label(),
            c.slowing_profile.label(),
            bits(c.slowing),
            c.relax_profile.label(),
            c.relax_power.to_string(),
        ]),
        None => row.extend(std::iter::repeat_n(String::new(), 6)),
    }
    row.extend([
        reconstruction_name(r.spec.problem.reconstruction).to_string(),
        r.status.name().to_string(),
        num(r.e_abc),
        num(r.end_time),
        r.steps.to_string(),
    ]);
    Ok(row)
}

pub fn timing_row(preset: &str, column: &str, r: &CaseReport) -> Vec<String> {
    let mut row = identity(preset, column, &r.spec);
    row.extend([num(r.runtime), r.steps.to_string()]);
    row
}
