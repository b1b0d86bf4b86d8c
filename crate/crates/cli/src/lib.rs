//! `dce` command-line front end: argument parsing, config resolution and
//! CSV/JSON output around `dce-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::mc::McOptions;
use config::{ConfigFile, Context, Overrides, SweepOptions};
use error::{CliError, Result};
use table::{emit, emit_json, Format};

#[derive(Debug, Parser)]
#[command(
    name = "dce",
    version,
    about = "Squeezing and phonon statistics of a power-modulated optomechanical oscillator"
)]
pub struct Cli {
    /// JSON file with the physical parameters.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Seed of the Monte Carlo generator.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// `ω_m/γ_m` of the scaled beyond-RWA model.
    #[arg(long, global = true, default_value_t = 200.0)]
    pub omega_ratio: f64,

    /// Integrate the full modulated equations instead of the RWA.
    #[arg(long, global = true)]
    pub beyond_rwa: bool,

    /// Override the modulation strength `s_ε`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s_eps: Option<f64>,

    /// Override the bath occupation `n̄_m`.
    #[arg(long, global = true)]
    pub nbar: Option<f64>,

    /// Override the cavity noise parameter `ξ`.
    #[arg(long, global = true)]
    pub xi: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived parameters, steady state and thresholds.
    Derive,
    /// Covariance, phonon number and squeezing versus time.
    Evolve {
        /// End time in units of `1/γ_m`.
        #[arg(long, default_value_t = 60.0)]
        t_end: f64,
        #[arg(long, default_value_t = 601)]
        points: usize,
    },
    /// Dataset behind one of figures 2 to 5.
    Fig {
        #[arg(value_parser = clap::value_parser!(u8))]
        index: u8,
    },
    /// Steady `g²(τ)` and the Mandel parameter.
    Stats {
        #[arg(long, default_value_t = 60.0)]
        t_end: f64,
        #[arg(long, default_value_t = 601)]
        points: usize,
        #[arg(long, default_value_t = 200)]
        lags: usize,
    },
    /// Steady-state position spectrum and linewidth.
    Spectrum {
        /// Half width of the `ω̃` grid.
        #[arg(long, default_value_t = 5.0)]
        half_width: f64,
        /// Grid size; must be odd.
        #[arg(long, default_value_t = 4001)]
        points: usize,
    },
    /// Parameter sweep; axes come from the config `sweep` section or `--axis`.
    Sweep {
        /// `name=min:max:count[:linear|log]`; repeatable.
        #[arg(long = "axis")]
        axes: Vec<String>,
        /// Comma-separated observables.
        #[arg(long, value_delimiter = ',')]
        observables: Vec<String>,
    },
    /// Monte Carlo ensemble against the closed form.
    Mc {
        #[arg(long, default_value_t = 10_000)]
        trajectories: usize,
        /// Step in units of `1/γ_m`.
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Duration in units of `1/γ_m`.
        #[arg(long, default_value_t = 5.0)]
        duration: f64,
        #[arg(long, default_value_t = 50)]
        record_every: usize,
        #[arg(long, default_value_t = 11)]
        lags: usize,
    },
}

fn context(cli: &Cli) -> Result<Context> {
    let file = cli.config.as_deref().map(ConfigFile::load).transpose()?;
    let overrides = Overrides {
        s_eps: cli.s_eps,
        nbar: cli.nbar,
        xi: cli.xi,
    };
    Context::new(file, overrides, cli.seed, cli.omega_ratio, cli.beyond_rwa)
}

fn sweep_options(ctx: &Context, axes: &[String], observables: &[String]) -> Result<SweepOptions> {
    let from_file = ctx.file.as_ref().and_then(|f| f.sweep.clone());
    let mut opts = match (axes.is_empty(), from_file) {
        (true, Some(o)) => o,
        (true, None) => return Err(CliError::Invalid("sweep needs --axis or a `sweep` section in the config".into())),
        (false, file) => SweepOptions {
            axes: axes.iter().map(|a| commands::sweep::parse_axis(a)).collect::<Result<_>>()?,
            observables: file.map(|f| f.observables).unwrap_or_default(),
        },
    };
    if !observables.is_empty() {
        opts.observables = observables.to_vec();
    }
    if opts.observables.is_empty() {
        opts.observables = commands::sweep::OBSERVABLES.iter().map(|s| s.to_string()).collect();
        if ctx.params.is_none() {
            opts.observables.retain(|o| o != "T_cr");
        }
    }
    Ok(opts)
}

pub fn execute(cli: &Cli) -> Result<()> {
    let ctx = context(cli)?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Derive => {
            emit_json("derive", &commands::derive::report(&ctx)?, out)?;
        }
        Command::Evolve { t_end, points } => {
            let table = if ctx.beyond_rwa {
                commands::evolve::beyond_rwa_table(&ctx, *t_end)?
            } else {
                commands::evolve::rwa_table(&ctx, *t_end, *points)?
            };
            emit(&[table], out, cli.format)?;
        }
        Command::Fig { index } => {
            emit(&commands::fig::figure(*index, &ctx)?, out, cli.format)?;
        }
        Command::Stats { t_end, points, lags } => {
            let (tables, summary) = commands::stats::run(&ctx, *t_end, *points, *lags)?;
            emit(&tables, out, cli.format)?;
            emit_json("stats", &summary, out)?;
        }
        Command::Spectrum { half_width, points } => {
            let (tables, summary) = commands::spectrum::run(&ctx, *half_width, *points)?;
            emit(&tables, out, cli.format)?;
            emit_json("spectrum_summary", &summary, out)?;
        }
        Command::Sweep { axes, observables } => {
            let opts = sweep_options(&ctx, axes, observables)?;
            emit(&[commands::sweep::run(&ctx, &opts)?], out, cli.format)?;
        }
        Command::Mc {
            trajectories,
            dt,
            duration,
            record_every,
            lags,
        } => {
            let opts = McOptions {
                trajectories: *trajectories,
                dt: *dt,
                duration: *duration,
                record_every: *record_every,
                lags: *lags,
            };
            let (tables, summary) = commands::mc::run(&ctx, &opts)?;
            emit(&tables, out, cli.format)?;
            // keep the sidecar from clobbering mc.json tables
            let name = if cli.format == Format::Json { "mc_run" } else { "mc" };
            emit_json(name, &summary, out)?;
        }
    }
    Ok(())
}

/// Runs the parsed command, reporting failures on stderr.
pub fn run(cli: Cli) -> ExitCode {
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
