//! Command-line front end for `eulergraph`.
//!
//! [`run`] does all the work and returns the rendered report with its exit
//! code, so the binary is a thin wrapper and tests can drive the CLI in
//! process.

mod commands;
mod human;
pub mod report;

use clap::{Args, Parser, Subcommand};
use eulergraph::FanSide;
use report::{Failure, Report};
use std::ffi::OsString;
use std::panic::AssertUnwindSafe;

#[derive(Parser, Debug)]
#[command(name = "eulergraph", version, about = "Euler classes of foliations carried by branched surfaces")]
struct Cli {
    /// Emit the JSON report (default).
    #[arg(long, global = true, conflicts_with = "human")]
    json: bool,
    /// Render the report as plain-text tables.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a triangulation.
    Validate { tri: String },
    /// Homology and cohomology of the dual cell structure in every degree.
    Homology { tri: String },
    /// Acyclic edge orientations.
    Orient {
        #[command(subcommand)]
        command: OrientCommand,
    },
    /// Euler classes from edge orientations.
    Euler {
        #[command(subcommand)]
        command: EulerCommand,
    },
    /// Taut ideal structures.
    Taut {
        #[command(subcommand)]
        command: TautCommand,
    },
    /// Maw dual graphs of branched-surface complexes.
    Maw {
        #[command(subcommand)]
        command: MawCommand,
    },
    /// Change in the Euler class from reversing a decomposing disk.
    Swap {
        /// Number of components in which the disk boundary meets the sutures.
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        /// The class δ: a homology class object or a plain array of free coordinates.
        #[arg(long)]
        delta: String,
    },
}

#[derive(Subcommand, Debug)]
enum OrientCommand {
    /// Enumerate acyclic orientations in lexicographic order.
    Enum {
        tri: String,
        #[command(flatten)]
        listing: Listing,
    },
}

#[derive(Subcommand, Debug)]
enum EulerCommand {
    /// The φ cochain and its class for one acyclic orientation.
    Dunfield {
        tri: String,
        /// One '+' or '-' per edge class, optionally prefixed by "orient".
        #[arg(long, allow_hyphen_values = true)]
        orient: String,
    },
}

#[derive(Subcommand, Debug)]
enum TautCommand {
    /// Enumerate taut structures in lexicographic order.
    Find {
        tri: String,
        #[command(flatten)]
        listing: Listing,
    },
    /// Flatten a taut structure and check the dual graph relations.
    Euler {
        tri: String,
        /// A literal such as "taut 01 23".
        #[arg(long)]
        taut: String,
        /// Fan side used for rectangle chains.
        #[arg(long, value_enum, default_value_t = FanSideArg::Default)]
        fan_side: FanSideArg,
    },
}

#[derive(Subcommand, Debug)]
enum MawCommand {
    /// Build the maw dual graph of a branched complex and check the cycle law.
    Graph {
        /// Branched complex JSON file.
        complex: String,
        /// Triangulation whose dual 1-chains the sector chains live in.
        #[arg(long)]
        tri: Option<String>,
    },
}

#[derive(Args, Debug)]
struct Listing {
    /// Stop after this many results.
    #[arg(long)]
    limit: Option<usize>,
    /// Report only the number of results.
    #[arg(long)]
    count_only: bool,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum FanSideArg {
    Default,
    Alternate,
}

impl From<FanSideArg> for FanSide {
    fn from(side: FanSideArg) -> Self {
        match side {
            FanSideArg::Default => FanSide::Default,
            FanSideArg::Alternate => FanSide::Alternate,
        }
    }
}

/// Rendered output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
}

/// Runs one command line. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { output: e.render().to_string(), exit_code: 0 };
            }
            let report = Report::failed(echo, Vec::new(), Failure::new("usage", e.render().to_string().trim_end()));
            return Outcome { output: report.to_json(), exit_code: report.exit_code };
        }
    };
    let report = match std::panic::catch_unwind(AssertUnwindSafe(|| commands::dispatch(&cli.command, echo.clone()))) {
        Ok(report) => report,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "command panicked".to_string());
            Report::failed(echo, Vec::new(), Failure::new("internal", message))
        }
    };
    let output = if cli.human { human::render(&report) } else { report.to_json() };
    Outcome { output, exit_code: report.exit_code }
}
