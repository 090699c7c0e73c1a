//! `sponge`: runs single absorbing-boundary cases and preset sweeps.

// `!(x > 0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cache;
mod config;
mod error;
mod output;
mod presets;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cache::ReferenceCache;
use config::{parse_equation, parse_method, parse_profile, parse_real, FlagOverrides, RunConfig};
use error::CliError;
use runner::Context;

#[derive(Parser)]
#[command(
    name = "sponge",
    version,
    about = "Sponge-layer absorbing boundary benchmark for 1D Lagrangian gas dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Run one case described by a key = value file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run a named preset and write its CSVs.
    Sweep {
        #[arg(long, help = format!("one of: {}", presets::PRESETS.join(", ")))]
        preset: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cells per wavelength.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Sponge width in wavelengths.
    #[arg(long, global = true)]
    omega_over_l: Option<String>,
    #[arg(long, global = true)]
    method: Option<String>,
    /// Maximum damping rate.
    #[arg(long, global = true)]
    sigma: Option<String>,
    /// A, B or B(<b>): damping profile, or relaxation weight for RM methods.
    #[arg(long, global = true)]
    profile: Option<String>,
    /// linear or nonlinear.
    #[arg(long, global = true)]
    equation: Option<String>,
    /// Refined resolution for the discretization error E_num.
    #[arg(long, global = true)]
    fine_n: Option<usize>,
    /// Reference cache directory (default: <out>/reference-cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Keep references in memory only.
    #[arg(long, global = true)]
    no_cache: bool,
}

impl Common {
    fn flags(&self) -> Result<FlagOverrides, CliError> {
        Ok(FlagOverrides {
            n: self.n,
            omega_over_l: self.omega_over_l.as_deref().map(parse_real).transpose()?,
            method: self.method.as_deref().map(parse_method).transpose()?,
            sigma: self.sigma.as_deref().map(parse_real).transpose()?,
            profile: self.profile.as_deref().map(parse_profile).transpose()?,
            equation: self.equation.as_deref().map(parse_equation).transpose()?,
        })
    }

    fn context(&self, out: &std::path::Path) -> Context {
        let dir = (!self.no_cache).then(|| self.cache_dir.clone().unwrap_or_else(|| out.join("reference-cache")));
        Context {
            cache: ReferenceCache::new(dir),
            out: out.to_path_buf(),
            fine_n: self.fine_n.filter(|&n| n > 0),
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let flags = cli.common.flags()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Run(e.to_string()))?;
    match &cli.command {
        Command::Run { config, out } => {
            let text =
                std::fs::read_to_string(config).map_err(|e| CliError::Config(format!("{}: {e}", config.display())))?;
            let mut run = RunConfig::parse(&text)?;
            run.apply_flags(&flags);
            let mut ctx = cli.common.context(out);
            ctx.fine_n = ctx.fine_n.or(run.fine_n);
            run.fine_n = ctx.fine_n;
            run.spec()?;
            let result = pool.install(|| runner::run_single(&run, &ctx));
            eprintln!("references computed: {}", ctx.cache.computed());
            result?;
        }
        Command::Sweep { preset, out } => {
            let plan = presets::build(preset, &flags)?;
            let ctx = cli.common.context(out);
            let result = pool.install(|| runner::run_sweep(&plan, &ctx));
            eprintln!("references computed: {}", ctx.cache.computed());
            result?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sponge: {e}");
            e.exit_code()
        }
    }
}
