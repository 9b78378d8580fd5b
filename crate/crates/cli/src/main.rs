//! Command-line front end for the enclosure library.

mod commands;
mod config;
mod output;
mod svg;
mod validate;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{ArgGroup, Parser, Subcommand};
use num_complex::Complex64;
use range_enclosure::ComplexPoint;

use crate::commands::StripTarget;
use crate::config::Problem;

const THREADS_ENV: &str = "RANGE_ENCLOSURE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "range-enclosure", version, about = "Numerical-range enclosures and resolvent bounds")]
struct Cli {
    /// Problem configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for grid computations (default: all cores, or $RANGE_ENCLOSURE_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The poles delta_+ and delta_- as JSON.
    Poles,
    /// Membership verdict for one point.
    Member {
        /// Point as `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
    },
    /// Segments and isolated points on the imaginary axis.
    Axis {
        /// Use the epsilon-pseudo enclosure instead.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Boundary curves as CSV.
    Boundary,
    /// Maximal horizontal strip of one curve family, or of every box edge.
    #[command(group(ArgGroup::new("family").args(["beta", "alpha"])))]
    Strip {
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
    /// Contours of the epsilon-pseudo enclosure as CSV.
    Pseudo {
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Distance eps0 and the resolvent bound at a point.
    Bound {
        /// Point as `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
    },
    /// Run the oracle suites on the configuration.
    Validate,
    /// SVG figure of the enclosure.
    Figure {
        /// Contour levels to overlay (repeatable).
        #[arg(long)]
        epsilon: Vec<f64>,
    },
}

/// Failure classes with distinct exit codes.
pub enum Failure {
    /// Bad configuration, arguments or I/O: exit 1.
    Config(anyhow::Error),
    /// Error raised by the library: exit 2.
    Numeric(range_enclosure::Error),
    /// A validation suite reported violations: exit 2.
    Validation,
}

impl Failure {
    pub fn io(e: impl Into<anyhow::Error>) -> Self {
        Failure::Config(e.into())
    }
}

impl From<range_enclosure::Error> for Failure {
    fn from(e: range_enclosure::Error) -> Self {
        Failure::Numeric(e)
    }
}

fn parse_point(s: &str) -> anyhow::Result<ComplexPoint> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [re, im] = parts[..] else { bail!("expected `re,im`, got {s:?}") };
    let parse = |t: &str| -> anyhow::Result<f64> {
        match t {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            _ => t.parse::<f64>().with_context(|| format!("invalid number {t:?}")),
        }
    };
    let (re, im) = (parse(re)?, parse(im)?);
    if re.is_nan() || im.is_nan() {
        bail!("NaN coordinate in {s:?}");
    }
    Ok(if re.is_finite() && im.is_finite() { ComplexPoint::new(re, im) } else { ComplexPoint::Infinity })
}

fn finite_point(s: &str) -> Result<Complex64, Failure> {
    parse_point(s).map_err(Failure::Config)?.finite().ok_or_else(|| Failure::Config(anyhow!("point must be finite")))
}

/// Writes to standard output; a closed pipe is not an error.
fn write_stdout(text: &str) -> std::io::Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => other,
    }
}

fn configure_threads(flag: Option<usize>) -> anyhow::Result<()> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse().with_context(|| format!("{THREADS_ENV}={v:?}"))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            bail!("thread count must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<String, Failure> {
    configure_threads(cli.threads).map_err(Failure::Config)?;
    let path = cli.config.as_ref().ok_or_else(|| Failure::Config(anyhow!("--config is required")))?;
    let pb = Problem::load(path).map_err(Failure::Config)?;
    let epsilon_or_config = |e: Option<f64>| -> Result<f64, Failure> {
        let e = e.or(pb.epsilon).ok_or_else(|| Failure::Config(anyhow!("--epsilon is required")))?;
        if !(e > 0.0 && e.is_finite()) {
            return Err(Failure::Config(anyhow!("epsilon must be positive and finite, got {e}")));
        }
        Ok(e)
    };
    match cli.command {
        Command::Poles => commands::poles_cmd(&pb),
        Command::Member { omega } => commands::member_cmd(&pb, parse_point(&omega).map_err(Failure::Config)?),
        Command::Axis { epsilon } => commands::axis_cmd(&pb, epsilon),
        Command::Boundary => commands::boundary_cmd(&pb),
        Command::Strip { beta, alpha } => {
            let target = match (beta, alpha) {
                (Some(b), _) => StripTarget::Beta(b),
                (_, Some(a)) => StripTarget::Alpha(a),
                _ => StripTarget::Edges,
            };
            commands::strip_cmd(&pb, target)
        }
        Command::Pseudo { epsilon } => commands::pseudo_cmd(&pb, epsilon_or_config(epsilon)?),
        Command::Bound { omega } => commands::bound_cmd(&pb, finite_point(&omega)?),
        Command::Validate => {
            let (text, pass) = validate::validate(&pb)?;
            if !pass {
                write_stdout(&text).map_err(Failure::io)?;
                return Err(Failure::Validation);
            }
            Ok(text)
        }
        Command::Figure { epsilon } => {
            let levels = if epsilon.is_empty() { pb.epsilon.into_iter().collect() } else { epsilon };
            svg::figure(&pb, &levels)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let output = cli.output.clone();
    match run(cli) {
        Ok(text) => {
            let written = match &output {
                Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
                None => write_stdout(&text).context("writing standard output"),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(1)
                }
            }
        }
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(2)
        }
        Err(Failure::Validation) => {
            eprintln!("VerificationFailure: oracle validation reported violations");
            ExitCode::from(2)
        }
    }
}
