//! Command-line front end. Reads a poset, graph, or partial-order file and
//! reports toric invariants of the associated monomial ring: the divisor
//! class group, edge weights, the conic region with its lattice points,
//! conic class counts by three independent routes, Gorenstein status,
//! source-unique acyclic orientations, the lattice-point polynomial of the
//! region, and the difference-root reduction. `verify` runs every internal
//! cross-check on one input.
//!
//! Exit codes: 0 success, 1 usage, 2 file parse error, 3 invalid input,
//! 4 enumeration over the configured limit, 5 failed internal cross-check.

mod error;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use error::{CliError, EXIT_PARSE, EXIT_USAGE};
use report::{Options, Outcome};

/// Default cap on enumeration sizes (circuit supports, subset expansions).
const DEFAULT_LIMIT: usize = 20;

#[derive(Parser)]
#[command(
    name = "signed-toric",
    version,
    about = "Toric invariants of signed posets and vector configurations",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Cap on enumeration sizes; overrides SIGNED_TORIC_LIMIT.
    #[arg(long, global = true, value_name = "N")]
    limit: Option<usize>,

    /// Seed for the randomized cross-checks in `verify`.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Divisor class group of the monomial ring.
    Classgroup { file: PathBuf },
    /// Weight of each generator in the class group.
    Weights { file: PathBuf },
    /// Slab description of the conic region in weight coordinates.
    Conic {
        file: PathBuf,
        /// Also list the interior lattice points.
        #[arg(long)]
        points: bool,
        /// Also print the number of conic classes.
        #[arg(long)]
        count: bool,
    },
    /// Number of conic classes by three independent routes.
    Count { file: PathBuf },
    /// Gorenstein / Q-Gorenstein classification with a witness.
    Gorenstein { file: PathBuf },
    /// Acyclic orientations with a unique source, and their classes.
    Orientations {
        file: PathBuf,
        /// Source vertex (e.g. v2); defaults to v1.
        #[arg(long, value_name = "V")]
        source: Option<String>,
    },
    /// Lattice-point polynomial of the closed region, with spot checks.
    Ehrhart { file: PathBuf },
    /// Switch and absorb halfedges until every generator is a difference.
    Reduce { file: PathBuf },
    /// Run every internal cross-check on the input.
    Verify { file: PathBuf },
}

impl Command {
    fn file(&self) -> &PathBuf {
        match self {
            Command::Classgroup { file }
            | Command::Weights { file }
            | Command::Conic { file, .. }
            | Command::Count { file }
            | Command::Gorenstein { file }
            | Command::Orientations { file, .. }
            | Command::Ehrhart { file }
            | Command::Reduce { file }
            | Command::Verify { file } => file,
        }
    }
}

fn resolve_limit(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(limit) = flag {
        return Ok(limit);
    }
    match std::env::var("SIGNED_TORIC_LIMIT") {
        Ok(raw) => raw.trim().parse().map_err(|_| CliError {
            code: EXIT_USAGE,
            message: format!("SIGNED_TORIC_LIMIT must be a nonnegative integer, got `{raw}`"),
        }),
        Err(_) => Ok(DEFAULT_LIMIT),
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = Options {
        json: cli.json,
        limit: resolve_limit(cli.limit)?,
        seed: cli.seed.unwrap_or(0),
    };
    let path = cli.command.file();
    let text = std::fs::read_to_string(path).map_err(|e| CliError {
        code: EXIT_PARSE,
        message: format!("cannot read {}: {}", path.display(), e),
    })?;
    let doc = input::parse(&text)?;
    match &cli.command {
        Command::Classgroup { .. } => report::classgroup(&doc, &opts),
        Command::Weights { .. } => report::weights(&doc, &opts),
        Command::Conic { points, count, .. } => report::conic(&doc, &opts, *points, *count),
        Command::Count { .. } => report::count(&doc, &opts),
        Command::Gorenstein { .. } => report::gorenstein(&doc, &opts),
        Command::Orientations { source, .. } => {
            report::orientations(&doc, &opts, source.as_deref())
        }
        Command::Ehrhart { .. } => report::ehrhart(&doc, &opts),
        Command::Reduce { .. } => report::reduce(&doc, &opts),
        Command::Verify { .. } => report::verify(&doc, &opts),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code as u8)
        }
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code as u8)
        }
    }
}
