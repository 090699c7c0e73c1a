//! Named sweeps that regenerate the benchmark tables and figures.

use sponge_core::diagnostics::reference::PistonProblem;
use sponge_core::experiment::{entropy_study, CaseSpec};
use sponge_core::sponge::{AbcMethod, ProfileKind};
use sponge_core::SystemKind;

use crate::config::{apply_profile, equation_name, FlagOverrides};
use crate::error::CliError;

pub const PRESETS: [&str; 10] = [
    "table1",
    "table2",
    "table3",
    "timing",
    "fig_sdo_sigma",
    "fig_ndo_sigma",
    "fig_rm_compare",
    "fig_all_compare",
    "fig_reflection",
    "fig_entropy",
];

const TABLE_OMEGAS: [f64; 4] = [0.125, 0.25, 0.5, 1.0];
const FIG_OMEGAS: [f64; 9] = [0.04, 0.08, 0.125, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0];
const LINEAR: SystemKind = SystemKind::LinearizedLagrangian;
const NONLINEAR: SystemKind = SystemKind::NonlinearLagrangian;
const BOTH: [SystemKind; 2] = [LINEAR, NONLINEAR];
const A: ProfileKind<f64> = ProfileKind::GammaA;
const B: ProfileKind<f64> = ProfileKind::GammaB { b: 0.5 };

/// One scored piston run; `column` names its series in tables and figures.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseJob {
    pub column: String,
    pub spec: CaseSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReflectionStudy {
    /// Damping rate varied at fixed resolution.
    Sigma,
    /// Resolution varied at default settings, with the bare-wall value alongside.
    Dx,
}

impl ReflectionStudy {
    pub fn name(self) -> &'static str {
        match self {
            ReflectionStudy::Sigma => "sigma",
            ReflectionStudy::Dx => "dx",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionJob {
    pub study: ReflectionStudy,
    pub method: AbcMethod,
    pub n: usize,
    pub omega_over_l: f64,
    pub sigma: Option<f64>,
    pub profile: Option<ProfileKind<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyJob {
    pub label: &'static str,
    pub spec: CaseSpec,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Plan {
    pub name: String,
    pub cases: Vec<CaseJob>,
    /// Also write the `omega_over_l` by column pivot of E_ABC.
    pub pivot: bool,
    pub reflection: Vec<ReflectionJob>,
    pub entropy: Vec<EntropyJob>,
}

impl Plan {
    pub fn is_empty(&self) -> bool {
        self.cases.is_empty() && self.reflection.is_empty() && self.entropy.is_empty()
    }
}

/// Grids a preset is built over; command-line flags replace them.
struct Grids {
    equations: Vec<SystemKind>,
    ns: Vec<usize>,
    omegas: Vec<f64>,
}

impl Grids {
    fn new(equations: &[SystemKind], ns: &[usize], omegas: &[f64], flags: &FlagOverrides) -> Self {
        Self {
            equations: equations
                .iter()
                .copied()
                .filter(|e| flags.equation.is_none_or(|f| f == *e))
                .collect(),
            ns: flags.n.map_or_else(|| ns.to_vec(), |n| vec![n]),
            omegas: flags.omega_over_l.map_or_else(|| omegas.to_vec(), |w| vec![w]),
        }
    }

    /// Every (equation, N, ω) combination, equation outermost.
    fn each(&self, mut f: impl FnMut(SystemKind, usize, f64)) {
        for &e in &self.equations {
            for &n in &self.ns {
                for &w in &self.omegas {
                    f(e, n, w);
                }
            }
        }
    }
}

fn case(kind: SystemKind, n: usize, method: AbcMethod, omega: f64) -> CaseSpec {
    CaseSpec::new(PistonProblem::new(kind, n), method, omega)
}

fn table1(flags: &FlagOverrides) -> Vec<CaseJob> {
    let mut jobs = Vec::new();
    Grids::new(&BOTH, &[250], &TABLE_OMEGAS, flags).each(|e, n, w| {
        for (s, d) in [(A, A), (A, B), (B, A), (B, B)] {
            let mut spec = case(e, n, AbcMethod::Sdo, w);
            spec.overrides.sigma = Some(30.0);
            spec.overrides.slowing_profile = Some(s);
            spec.overrides.damping_profile = Some(d);
            let column = format!("{} s={} d={}", equation_name(e), s.label(), d.label());
            jobs.push(CaseJob { column, spec });
        }
    });
    jobs
}

fn table2(flags: &FlagOverrides) -> Vec<CaseJob> {
    let mut jobs = Vec::new();
    Grids::new(&[NONLINEAR], &[250], &TABLE_OMEGAS, flags).each(|e, n, w| {
        for d in [A, B] {
            let mut spec = case(e, n, AbcMethod::Ndo, w);
            spec.overrides.sigma = Some(20.0);
            spec.overrides.damping_profile = Some(d);
            jobs.push(CaseJob {
                column: format!("{} d={}", equation_name(e), d.label()),
                spec,
            });
        }
    });
    jobs
}

fn table3(flags: &FlagOverrides) -> Vec<CaseJob> {
    let mut jobs = Vec::new();
    Grids::new(&BOTH, &[250], &TABLE_OMEGAS, flags).each(|e, n, w| {
        for m in [AbcMethod::Rm, AbcMethod::RmM] {
            for g in [A, B] {
                let mut spec = case(e, n, m, w);
                spec.overrides.relax_profile = Some(g);
                jobs.push(CaseJob {
                    column: format!("{} {m} w={}", equation_name(e), g.label()),
                    spec,
                });
            }
        }
    });
    jobs
}

fn sigma_figure(method: AbcMethod, sigmas: &[f64], flags: &FlagOverrides) -> Vec<CaseJob> {
    let mut jobs = Vec::new();
    Grids::new(&[NONLINEAR], &[250], &FIG_OMEGAS, flags).each(|e, n, w| {
        for &s in sigmas {
            let mut spec = case(e, n, method, w);
            spec.overrides.sigma = Some(s);
            jobs.push(CaseJob {
                column: format!("{} sigma={s}", equation_name(e)),
                spec,
            });
        }
    });
    jobs
}

/// Methods over the figure grid; methods without a sponge run once per grid.
fn comparison(
    methods: &[AbcMethod],
    equations: &[SystemKind],
    ns: &[usize],
    omegas: &[f64],
    flags: &FlagOverrides,
) -> Vec<CaseJob> {
    let grids = Grids::new(equations, ns, omegas, flags);
    let mut jobs = Vec::new();
    for &e in &grids.equations {
        for &n in &grids.ns {
            for &m in methods {
                let omegas = if m.uses_sponge() {
                    grids.omegas.clone()
                } else {
                    vec![0.0]
                };
                for w in omegas {
                    jobs.push(CaseJob {
                        column: format!("{} N={n} {m}", equation_name(e)),
                        spec: case(e, n, m, w),
                    });
                }
            }
        }
    }
    jobs
}

const FIG_NS: [usize; 3] = [10, 50, 250];
const RM_FAMILY: [AbcMethod; 6] = [
    AbcMethod::Rm,
    AbcMethod::RmM,
    AbcMethod::Rm2,
    AbcMethod::RmM2,
    AbcMethod::RmRk,
    AbcMethod::RmMRk,
];
const ALL_COMPARE: [AbcMethod; 6] = [
    AbcMethod::Sdo,
    AbcMethod::SSdo,
    AbcMethod::Ndo,
    AbcMethod::Rm,
    AbcMethod::RmM,
    AbcMethod::Extrapolation,
];

fn reflection(flags: &FlagOverrides) -> Vec<ReflectionJob> {
    let omega = flags.omega_over_l.unwrap_or(1.0);
    let sigmas = flags
        .sigma
        .map_or_else(|| vec![0.1, 0.3, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0], |s| vec![s]);
    let mut jobs = Vec::new();
    for method in [AbcMethod::Sdo, AbcMethod::SSdo] {
        for &s in &sigmas {
            jobs.push(ReflectionJob {
                study: ReflectionStudy::Sigma,
                method,
                n: flags.n.unwrap_or(50),
                omega_over_l: omega,
                sigma: Some(s),
                profile: flags.profile,
            });
        }
    }
    let ns = flags.n.map_or_else(|| vec![4, 5, 6, 8, 10, 16, 25, 50], |n| vec![n]);
    for method in [AbcMethod::Rm, AbcMethod::RmM] {
        for &n in &ns {
            jobs.push(ReflectionJob {
                study: ReflectionStudy::Dx,
                method,
                n,
                omega_over_l: omega,
                sigma: None,
                profile: flags.profile,
            });
        }
    }
    jobs
}

fn entropy(flags: &FlagOverrides) -> Vec<EntropyJob> {
    let [mut slow, mut damped] = entropy_study(flags.n.unwrap_or(250));
    for spec in [&mut slow, &mut damped] {
        if let Some(w) = flags.omega_over_l {
            spec.omega_over_l = w;
        }
        if let Some(p) = flags.profile {
            apply_profile(&mut spec.overrides, spec.method, p);
        }
    }
    if let Some(s) = flags.sigma {
        damped.overrides.sigma = Some(s);
    }
    vec![
        EntropyJob {
            label: "slow_only",
            spec: slow,
        },
        EntropyJob {
            label: "slow_damp",
            spec: damped,
        },
    ]
}

/// The preset `name` with `flags` applied: `--equation` and `--method`
/// filter runs, `--n` and `--omega-over-l` replace the grids, `--sigma` and
/// `--profile` override every run's settings.
pub fn build(name: &str, flags: &FlagOverrides) -> Result<Plan, CliError> {
    let mut plan = Plan {
        name: name.to_string(),
        ..Default::default()
    };
    match name {
        "table1" => plan.cases = table1(flags),
        "table2" => plan.cases = table2(flags),
        "table3" => plan.cases = table3(flags),
        "timing" => plan.cases = comparison(&ALL_COMPARE, &[NONLINEAR], &FIG_NS, &[10.0], flags),
        "fig_sdo_sigma" => plan.cases = sigma_figure(AbcMethod::Sdo, &[5.0, 10.0, 20.0, 30.0, 40.0, 50.0], flags),
        "fig_ndo_sigma" => plan.cases = sigma_figure(AbcMethod::Ndo, &[5.0, 10.0, 15.0, 20.0, 25.0, 30.0], flags),
        "fig_rm_compare" => plan.cases = comparison(&RM_FAMILY, &BOTH, &FIG_NS, &FIG_OMEGAS, flags),
        "fig_all_compare" => plan.cases = comparison(&ALL_COMPARE, &BOTH, &FIG_NS, &FIG_OMEGAS, flags),
        "fig_reflection" => plan.reflection = reflection(flags),
        "fig_entropy" => {
            if flags.equation.is_some_and(|e| e != NONLINEAR) {
                return Err(CliError::Config(
                    "fig_entropy is defined for the nonlinear system only".into(),
                ));
            }
            plan.entropy = entropy(flags);
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown preset '{other}' (known: {})",
                PRESETS.join(", ")
            )));
        }
    }
    plan.pivot = name.starts_with("table");
    if let Some(m) = flags.method {
        plan.cases.retain(|j| j.spec.method == m);
        plan.reflection.retain(|j| j.method == m);
        plan.entropy.retain(|j| j.spec.method == m);
    }
    for job in &mut plan.cases {
        let o = &mut job.spec.overrides;
        if let Some(s) = flags.sigma {
            o.sigma = Some(s);
        }
        if let Some(p) = flags.profile {
            apply_profile(o, job.spec.method, p);
        }
    }
    if plan.is_empty() {
        return Err(CliError::Config(format!(
            "preset '{name}' has no runs left after the given filters"
        )));
    }
    Ok(plan)
}
