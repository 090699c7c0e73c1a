//! Executes single runs and preset sweeps on the thread pool and writes their CSVs.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sponge_core::diagnostics::entropy::max_increment;
use sponge_core::diagnostics::metrics::error_num;
use sponge_core::diagnostics::reference::PistonProblem;
use sponge_core::diagnostics::reflection::{reflection_theory, ReflectionExperiment, ReflectionRecord};
use sponge_core::experiment::{entropy_series, run_case, run_case_observed, CaseReport, RunStatus};
use sponge_core::{EquationSystem, Error};

use crate::cache::ReferenceCache;
use crate::config::{check_spec, equation_name, RunConfig};
use crate::error::CliError;
use crate::output::*;
use crate::presets::{CaseJob, Plan, ReflectionJob, ReflectionStudy};

pub struct Context {
    pub cache: ReferenceCache,
    pub out: PathBuf,
    pub fine_n: Option<usize>,
}

/// Counts used for the exit status.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Summary {
    pub runs: usize,
    pub diverged: usize,
}

impl Summary {
    pub fn into_result(self) -> Result<Self, CliError> {
        if self.runs > 0 && self.diverged == self.runs {
            Err(CliError::AllDiverged(self.runs))
        } else {
            Ok(self)
        }
    }
}

fn distinct<T: PartialEq + Copy>(items: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut out = Vec::new();
    for x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn prefetch(cache: &ReferenceCache, problems: &[PistonProblem]) -> Result<(), CliError> {
    problems.par_iter().try_for_each(|p| cache.get(p).map(drop))
}

fn run_cases(jobs: &[CaseJob], cache: &ReferenceCache) -> Result<Vec<CaseReport>, CliError> {
    for j in jobs {
        check_spec(&j.spec).map_err(|e| CliError::Config(format!("{}: {}", j.column, e.message())))?;
    }
    prefetch(cache, &distinct(jobs.iter().map(|j| j.spec.problem)))?;
    jobs.par_iter()
        .map(|j| {
            let reference = cache.get(&j.spec.problem)?;
            Ok(run_case(&j.spec, &reference)?)
        })
        .collect()
}

/// Discretization error of each problem against its refinement to `fine_n`.
fn e_num_rows(problems: &[PistonProblem], fine_n: usize, cache: &ReferenceCache) -> Result<Vec<Vec<String>>, CliError> {
    for p in problems {
        if !fine_n.is_multiple_of(p.cells_per_wavelength) {
            return Err(CliError::Config(format!(
                "fine_n = {fine_n} is not a multiple of n = {}",
                p.cells_per_wavelength
            )));
        }
    }
    let fine = |p: &PistonProblem| PistonProblem {
        cells_per_wavelength: fine_n,
        ..*p
    };
    let all: Vec<PistonProblem> = problems.iter().flat_map(|p| [*p, fine(p)]).collect();
    prefetch(cache, &distinct(all))?;
    problems
        .iter()
        .map(|p| {
            let e = error_num(&cache.get(p)?.trajectory, &cache.get(&fine(p))?.trajectory)?;
            Ok(vec![
                equation_name(p.kind).to_string(),
                p.cells_per_wavelength.to_string(),
                fine_n.to_string(),
                num(e),
            ])
        })
        .collect()
}

fn write_e_num(path: &Path, problems: &[PistonProblem], ctx: &Context) -> Result<(), CliError> {
    if let Some(fine_n) = ctx.fine_n {
        let mut t = Table::create(path, &E_NUM_HEADER)?;
        for row in e_num_rows(problems, fine_n, &ctx.cache)? {
            t.row(row)?;
        }
        t.finish()?;
    }
    Ok(())
}

fn report_line(column: &str, r: &CaseReport) {
    println!(
        "{:<28} {:<9} N={:<4} w/L={:<6} {:<13} {:<9} E_ABC={:e}",
        column,
        equation_name(r.spec.problem.kind),
        r.spec.problem.cells_per_wavelength,
        r.spec.omega_over_l,
        r.spec.method.name(),
        r.status.name(),
        r.e_abc
    );
}

fn tally<'a>(reports: impl IntoIterator<Item = &'a CaseReport>) -> Summary {
    let mut s = Summary::default();
    for r in reports {
        s.runs += 1;
        s.diverged += (r.status == RunStatus::Diverged) as usize;
    }
    s
}

/// One configured run, with optional state snapshots and discretization error.
pub fn run_single(config: &RunConfig, ctx: &Context) -> Result<Summary, CliError> {
    let spec = config.spec()?;
    let reference = ctx.cache.get(&spec.problem)?;
    let eq = spec.problem.equations()?;
    let every = config.snapshot_every;
    let mut frame = 0;
    let mut snapshots: Vec<Vec<String>> = Vec::new();
    let report = run_case_observed(&spec, &reference, |f| {
        frame += 1;
        if every > 0 && frame % every == 0 {
            for (i, q) in f.interior().iter().enumerate() {
                snapshots.push(vec![
                    num(f.time),
                    num(f.grid.center(i)),
                    num(q.volume()),
                    num(q.velocity()),
                    num(q.energy()),
                    num(eq.pressure(q)?),
                ]);
            }
        }
        Ok(())
    })?;
    std::fs::create_dir_all(&ctx.out)?;
    let mut runs = Table::create(&ctx.out.join("run.csv"), &RUNS_HEADER)?;
    runs.row(run_row("run", "", &report)?)?;
    runs.finish()?;
    let mut timing = Table::create(&ctx.out.join("run_timing.csv"), &TIMING_HEADER)?;
    timing.row(timing_row("run", "", &report))?;
    timing.finish()?;
    if every > 0 {
        let mut t = Table::create(&ctx.out.join("run_snapshots.csv"), &SNAPSHOT_HEADER)?;
        for row in snapshots {
            t.row(row)?;
        }
        t.finish()?;
    }
    write_e_num(&ctx.out.join("run_e_num.csv"), &[spec.problem], ctx)?;
    report_line("run", &report);
    tally([&report]).into_result()
}

fn write_pivot(path: &Path, jobs: &[CaseJob], reports: &[CaseReport]) -> Result<(), CliError> {
    let columns = distinct(jobs.iter().map(|j| j.column.as_str()));
    let omegas: Vec<f64> = distinct(reports.iter().map(|r| r.spec.omega_over_l));
    let mut cells: HashMap<(&str, u64), f64> = HashMap::new();
    for (j, r) in jobs.iter().zip(reports) {
        cells.insert((j.column.as_str(), r.spec.omega_over_l.to_bits()), r.e_abc);
    }
    let mut header: Vec<&str> = PIVOT_LEADING.to_vec();
    header.extend(&columns);
    let mut t = Table::create(path, &header)?;
    for w in omegas {
        let mut row = vec![num(w)];
        row.extend(
            columns
                .iter()
                .map(|c| cells.get(&(*c, w.to_bits())).map_or(String::new(), |&e| num(e))),
        );
        t.row(row)?;
    }
    t.finish()
}

fn run_reflection(job: &ReflectionJob) -> Result<(Vec<String>, bool), CliError> {
    let exp = ReflectionExperiment::new(job.n, job.omega_over_l);
    let config = exp.config(job.method, |c| {
        if let Some(s) = job.sigma {
            c.sigma = c.sigma.map(|v| if v > 0.0 { s } else { 0.0 });
        }
        if let Some(p) = job.profile {
            if job.method.is_relaxation() {
                c.relax_profile = p;
            } else {
                c.damping_profile = p;
            }
        }
    })?;
    let dx = 2.0 * PI / job.n as f64;
    let theory = reflection_theory(
        job.method,
        &config,
        &EquationSystem::linearized(exp.gamma)?,
        dx,
        exp.courant,
    )?;
    let record: Option<ReflectionRecord> = match exp.record(job.method, &config) {
        Ok(r) => Some(r),
        Err(Error::Diverged { .. } | Error::NonPhysicalState(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let wall = match job.study {
        ReflectionStudy::Dx => Some(exp.measure_wall()?),
        ReflectionStudy::Sigma => None,
    };
    let sigma = config.sigma.iter().fold(0.0, |a: f64, &b| a.max(b));
    let row = vec![
        job.study.name().to_string(),
        job.method.name().to_string(),
        job.n.to_string(),
        num(job.omega_over_l),
        num(dx),
        num(sigma),
        if record.is_some() { "completed" } else { "diverged" }.to_string(),
        num(theory),
        num(record.map_or(f64::INFINITY, |r| r.numerical)),
        wall.map_or(String::new(), num),
    ];
    Ok((row, record.is_none()))
}

/// Every run of `plan`, written under `ctx.out` with the preset name as prefix.
pub fn run_sweep(plan: &Plan, ctx: &Context) -> Result<Summary, CliError> {
    let name = &plan.name;
    let file = |suffix: &str| ctx.out.join(format!("{name}{suffix}.csv"));
    std::fs::create_dir_all(&ctx.out)?;
    let mut summary = Summary::default();

    if !plan.cases.is_empty() {
        let reports = run_cases(&plan.cases, &ctx.cache)?;
        let mut runs = Table::create(&file("_runs"), &RUNS_HEADER)?;
        let mut timing = Table::create(&file("_timing"), &TIMING_HEADER)?;
        for (j, r) in plan.cases.iter().zip(&reports) {
            runs.row(run_row(name, &j.column, r)?)?;
            timing.row(timing_row(name, &j.column, r))?;
            report_line(&j.column, r);
        }
        runs.finish()?;
        timing.finish()?;
        if plan.pivot {
            write_pivot(&file(""), &plan.cases, &reports)?;
        }
        write_e_num(
            &file("_e_num"),
            &distinct(plan.cases.iter().map(|j| j.spec.problem)),
            ctx,
        )?;
        let s = tally(&reports);
        summary.runs += s.runs;
        summary.diverged += s.diverged;
    }

    if !plan.reflection.is_empty() {
        let rows = plan
            .reflection
            .par_iter()
            .map(run_reflection)
            .collect::<Result<Vec<_>, _>>()?;
        let mut t = Table::create(&file(""), &REFLECTION_HEADER)?;
        for (row, diverged) in rows {
            println!("{}", row.join(" "));
            t.row(row)?;
            summary.runs += 1;
            summary.diverged += diverged as usize;
        }
        t.finish()?;
    }

    if !plan.entropy.is_empty() {
        let series = plan
            .entropy
            .par_iter()
            .map(|j| {
                check_spec(&j.spec)?;
                match entropy_series(&j.spec) {
                    Ok(s) => Ok(Some(s)),
                    Err(Error::Diverged { .. } | Error::NonPhysicalState(_)) => Ok(None),
                    Err(e) => Err(e.into()),
                }
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let mut summary_table = Table::create(&file("_summary"), &ENTROPY_SUMMARY_HEADER)?;
        for (j, s) in plan.entropy.iter().zip(&series) {
            let mut row = vec![
                j.label.to_string(),
                j.spec.problem.cells_per_wavelength.to_string(),
                num(j.spec.omega_over_l),
            ];
            summary.runs += 1;
            let Some(s) = s else {
                println!("{:<10} diverged", j.label);
                row.extend(["diverged".to_string(), String::new(), String::new()]);
                summary_table.row(row)?;
                summary.diverged += 1;
                continue;
            };
            let mut t = Table::create(&file(&format!("_{}", j.label)), &ENTROPY_HEADER)?;
            for (time, value) in s {
                t.row([num(*time), num(*value)])?;
            }
            t.finish()?;
            let values: Vec<f64> = s.iter().map(|p| p.1).collect();
            let net = values.last().unwrap_or(&0.0) - values.first().unwrap_or(&0.0);
            let inc = max_increment(&values);
            println!("{:<10} max increment {inc:e}, net change {net:e}", j.label);
            row.extend(["completed".to_string(), num(inc), num(net)]);
            summary_table.row(row)?;
        }
        summary_table.finish()?;
    }
    summary.into_result()
}
