//! `orlicz`: runs verification suites and emits reports or curve data.
//!
//! Exit status: 0 when every check passes, 1 when any check fails, 2 on a
//! configuration error, 3 on an I/O error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use orlicz_core::suite::{self, CheckId, Curve, Format, SuiteConfig};
use orlicz_core::Error;

#[derive(Parser)]
#[command(name = "orlicz", version, about = "Numerical checks for Orlicz-type norms of disjoint-block processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite and write a report.
    Run {
        /// JSON config file; flags override its values.
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
        /// Comma-separated check ids (default: all).
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// Report format.
        #[arg(long)]
        format: Option<String>,
    },
    /// Write `abscissa,value` CSV for sup_tail, sup_lp or eq22_integral.
    Curve {
        name: String,
        /// JSON config file; flags override its values.
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// List the available check ids.
    Checks,
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    p0: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Last partial-sum checkpoint of the divergence checks.
    #[arg(long)]
    nmax: Option<u64>,
    /// Quadrature accuracy for norm computations.
    #[arg(long)]
    tol: Option<f64>,
    /// Output path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(path: Option<&PathBuf>, o: &Overrides) -> Result<SuiteConfig, Error> {
    let mut c = match path {
        Some(p) => SuiteConfig::from_path(p)?,
        None => SuiteConfig::default(),
    };
    if let Some(v) = o.alpha {
        c.alpha = v;
    }
    if let Some(v) = o.p0 {
        c.p0 = v;
    }
    if let Some(v) = o.seed {
        c.seed = v;
    }
    if let Some(v) = o.nmax {
        c.n_max = v;
    }
    if let Some(v) = o.tol {
        c.tol = v;
    }
    if o.out.is_some() {
        c.out = o.out.clone();
    }
    Ok(c)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Run {
            config,
            overrides,
            checks,
            format,
        } => {
            let mut c = load(config.as_ref(), &overrides)?;
            if let Some(ids) = checks {
                c.checks = ids.iter().map(|s| s.trim().parse::<CheckId>()).collect::<Result<_, _>>()?;
            }
            if let Some(f) = format {
                c.format = f.parse::<Format>()?;
            }
            let report = suite::run_suite(&c)?;
            suite::emit(&report, c.format, c.out.as_deref())?;
            eprintln!(
                "{} passed, {} failed, {} total",
                report.summary.passed, report.summary.failed, report.summary.total
            );
            Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Curve {
            name,
            config,
            overrides,
        } => {
            let curve = name.parse::<Curve>()?;
            let c = load(config.as_ref(), &overrides)?;
            suite::emit_curve(curve, &c, c.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Checks => {
            for id in CheckId::ALL {
                println!("{id}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("orlicz: {e}");
            match e {
                Error::Config(_) => ExitCode::from(2),
                Error::Io(_) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}
