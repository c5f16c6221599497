//! The `opendom` command line: distances, subbasic membership, convergence
//! reports and the invariant suites, with JSON or CSV output.

#![allow(clippy::result_large_err)]

pub mod commands;
pub mod formats;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use opendom_core::{parse_rational, AmbientSpace, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn space_arg(s: &str) -> Result<AmbientSpace, String> {
    s.parse().map_err(|e: opendom_core::Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "opendom", version, about = "Exact metrics on partial maps with open domains")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct GlobalArgs {
    /// Width bound for series enclosures, as p/q.
    #[arg(long, global = true, default_value = "1/4096", value_parser = rational_arg)]
    pub tol: Rational,
    /// Override the basis-index cutoff N.
    #[arg(long, global = true)]
    pub trunc_n: Option<u32>,
    /// Override the exhaustion cutoff M.
    #[arg(long, global = true)]
    pub trunc_m: Option<u32>,
    /// Cases per space for each invariant suite.
    #[arg(long, global = true, default_value_t = 100)]
    pub samples: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout (a directory for `counterexample`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Ambient space for keywords and spaceless files: reals or unit_interval.
    #[arg(long, global = true, value_parser = space_arg)]
    pub space: Option<AmbientSpace>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// β between two maps, or d_γ with --gamma.
    Dist {
        f: String,
        g: String,
        #[arg(long)]
        gamma: bool,
    },
    /// d_Fell between two closed sets.
    FellDist { a: String, b: String },
    /// Membership in a subbasic open set.
    Member {
        #[command(subcommand)]
        predicate: Member,
    },
    /// Decay tables and Cauchy diagnostics for a sequence.
    Converge(ConvergeArgs),
    /// Write f_n(x) = nx on [0,1/n) and its inverse to files.
    Counterexample {
        #[arg(long, default_value_t = 8)]
        count: u64,
    },
    /// Run every invariant suite.
    Axioms {
        /// Swap the β_mn case table for a wrong one.
        #[arg(long, hide = true)]
        corrupt_beta: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum Member {
    /// f ∈ ⟨K,V⟩
    CompactOpen {
        map: String,
        #[arg(long)]
        compact: String,
        #[arg(long)]
        open: String,
    },
    /// f ∈ ⟨K,V⟩⁻¹
    CompactOpenInv {
        map: String,
        #[arg(long)]
        compact: String,
        #[arg(long)]
        open: String,
    },
    /// A ∈ V⁻
    Hit {
        set: String,
        #[arg(long)]
        open: String,
    },
    /// A ∈ (X∖K)⁺
    Miss {
        set: String,
        #[arg(long)]
        compact: String,
    },
    /// g ∈ B_K(f, ε)
    Ball {
        map: String,
        #[arg(long)]
        center: String,
        #[arg(long)]
        compact: String,
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
    },
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    /// counterexample, counterexample-inverse, constant:MAP, or
    /// affine:a=EXPR,b=EXPR,dom=DOMAIN[,space=S][,codomain=S]
    #[arg(long)]
    pub seq: String,
    /// Limit for the β decay table (default: the constant itself, else empty).
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub indices: Vec<u64>,
    /// Run the γ-Cauchy check on f_1..f_PREFIX.
    #[arg(long)]
    pub prefix: Option<u64>,
    /// Compact set, repeatable.
    #[arg(long = "compact")]
    pub compacts: Vec<String>,
    /// Fell limit of the domain complements for the γ-Cauchy check.
    #[arg(long)]
    pub candidate: Option<String>,
    /// Check the inverse-limit theorem against limits F and G.
    #[arg(long, num_args = 2, value_names = ["F", "G"])]
    pub inverse_check: Option<Vec<String>>,
    /// Build a limit candidate from f_INDEX on the first compact.
    #[arg(long)]
    pub limit_at: Option<u64>,
    #[arg(long, default_value = "1/64", value_parser = rational_arg)]
    pub mesh: Rational,
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code: 0 on success, 1 when a suite reports violations, 2 on errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match commands::execute(&cli, stderr) {
        Ok(report) => {
            let text = report.render(cli.global.format);
            let written = match (&cli.global.out, &cli.command) {
                (Some(path), c) if !matches!(c, Command::Counterexample { .. }) => std::fs::write(path, &text),
                _ => stdout.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            if report.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
