//! Command-line front end for `balconf`.
//!
//! Exit codes are shared by every command: 0 when the property holds, 1 when it
//! fails (the report carries the certificate), 2 for input or usage errors.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod config;
pub mod json;
pub mod svg;

use commands::{CliError, Clock, GenArgs, Outcome, SearchArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
}

#[derive(Debug, Parser)]
#[command(
    name = "balconf",
    version,
    about = "Balanced plane vector configurations"
)]
pub struct Cli {
    /// Absolute determinant tolerance (default: 1e-9 relative to the largest |det|).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for `gen` scrambling and perturbation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file, or directory for `search`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Add wall-clock time to reports.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Balanced and uniform verdicts with witnesses.
    Check { path: PathBuf },
    /// Map a uniform balanced configuration onto the roots of unity.
    Canon { path: PathBuf },
    /// Closure parameters from the integer polynomials and from the closed form.
    Roots {
        #[arg(long, conflicts_with = "m", required_unless_present = "m")]
        n: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
    },
    /// Write the roots of unity, or the model configuration at `t_k` with `--k`.
    Gen {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        k: Option<u64>,
        /// Offset every vector by a seeded amount in `[eps/2, eps]`.
        #[arg(long)]
        perturb: Option<f64>,
    },
    /// Enumerate balanced configurations over a small grid.
    Search {
        #[arg(long)]
        m: u64,
        /// Comma-separated rational coordinates, e.g. `-1,0,1`.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        coords: Vec<String>,
        /// Keep uniform configurations only.
        #[arg(long)]
        uniform: bool,
        /// One representative per set instead of every ordering.
        #[arg(long)]
        dedupe: bool,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Draw a configuration as SVG.
    Render { path: PathBuf },
}

fn require_format(given: Option<Format>, allowed: Format, command: &str) -> Result<(), CliError> {
    match given {
        Some(f) if f != allowed => Err(CliError::Usage(format!(
            "{command} only supports --format {}",
            match allowed {
                Format::Json => "json",
                Format::Svg => "svg",
            }
        ))),
        _ => Ok(()),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(CliError::Usage(
                "--tol must be a finite nonnegative number".into(),
            ));
        }
    }
    let clock = Clock::start(cli.timing);
    let out = cli.out.as_ref();
    match &cli.command {
        Command::Check { path } => {
            require_format(cli.format, Format::Json, "check")?;
            commands::deliver(commands::check(path, cli.tol, clock)?, out)
        }
        Command::Canon { path } => {
            require_format(cli.format, Format::Json, "canon")?;
            commands::deliver(commands::canon(path, cli.tol, clock)?, out)
        }
        Command::Roots { n, m } => {
            require_format(cli.format, Format::Json, "roots")?;
            commands::deliver(commands::roots(*n, *m, clock)?, out)
        }
        Command::Gen { m, k, perturb } => {
            require_format(cli.format, Format::Json, "gen")?;
            let args = GenArgs {
                m: *m,
                k: *k,
                seed: cli.seed,
                perturb: *perturb,
            };
            commands::gen(&args, out.map(|p| p.as_path()))
        }
        Command::Search {
            m,
            coords,
            uniform,
            dedupe,
            budget,
        } => {
            require_format(cli.format, Format::Json, "search")?;
            let args = SearchArgs {
                m: *m,
                coords: coords.clone(),
                uniform: *uniform,
                dedupe: *dedupe,
                budget: *budget,
            };
            commands::search(&args, out.map(|p| p.as_path()), clock)
        }
        Command::Render { path } => {
            require_format(cli.format, Format::Svg, "render")?;
            commands::render(path, out.map(|p| p.as_path()))
        }
    }
}
