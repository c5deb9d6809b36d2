//! `profinite`: evaluate formulas on level towers, run the decision
//! procedures and constructions, dump trees.
//!
//! Exit codes: 0 success, 1 suite failure, 2 input error, 3 refusal.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use profinite::presentation::Encoding;
use profinite::CheckError;

#[derive(Parser)]
#[command(
    name = "profinite",
    version,
    about = "Profinite permutation groups as towers of finite levels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the truth value of a formula at each level
    Eval(EvalArgs),
    /// Run a decision procedure and print its report
    Decide(DecideArgs),
    /// Replay a stage construction from an oracle table
    Construct(ConstructArgs),
    /// Write the tree of level elements
    Dump(DumpArgs),
    /// Run an invariant suite
    Verify(VerifyArgs),
    /// Parse a formula and print its normal form and classification
    Parse(FormulaArgs),
}

#[derive(Args)]
struct FormulaArgs {
    /// Formula text, or `@alpha:N`
    #[arg(
        long,
        short,
        required_unless_present = "formula_file",
        conflicts_with = "formula_file"
    )]
    formula: Option<String>,
    /// Read the formula from a file
    #[arg(long)]
    formula_file: Option<PathBuf>,
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long, default_value_t = 0)]
    kmin: usize,
    #[arg(long, default_value_t = 6)]
    kmax: usize,
}

#[derive(Args)]
struct EvalArgs {
    /// Group spec, block dump, or `builtin:NAME`
    #[arg(long, short)]
    group: String,
    #[command(flatten)]
    formula: FormulaArgs,
    #[command(flatten)]
    range: RangeArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Existential sentences on orbit-independent groups
    Oi,
    /// Witness tree of a quantifier-free matrix
    Witness,
    /// Per-level values and the tail they settle on
    Fv,
    /// Quantifier-free formula on handle-bound paths
    Limit,
}

#[derive(Args)]
struct DecideArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long, short)]
    group: String,
    #[command(flatten)]
    formula: FormulaArgs,
    #[command(flatten)]
    range: RangeArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Sigma1,
    Sigma2,
    #[value(name = "sqrt_diag", alias = "sqrt-diag")]
    SqrtDiag,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Oracle table; omitted means nothing ever halts or grows
    #[arg(long)]
    oracle: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    stages: usize,
    /// Write a group spec here and the stage log next to it as `.log`
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DumpArgs {
    #[arg(long, short)]
    group: String,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[arg(long, default_value_t = Encoding::Block)]
    encoding: Encoding,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    /// Positive formulas persist down, negative ones up
    Persistence,
    /// Level checks, branching counts, handle coherence, dump round trip
    Coherence,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Groups to check (repeatable); defaults to every builtin
    #[arg(long, short)]
    group: Vec<String>,
    #[arg(long, default_value_t = 6)]
    kmax: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 20240601)]
    seed: u64,
}

/// A suite ran to completion and found violations.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct SuiteFailed(String);

fn exit_code(err: &anyhow::Error) -> u8 {
    let refused = err
        .chain()
        .any(|e| matches!(e.downcast_ref::<CheckError>(), Some(CheckError::Refused { .. })));
    if refused {
        3
    } else if err.downcast_ref::<SuiteFailed>().is_some() {
        1
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(a) => commands::eval(a),
        Command::Decide(a) => commands::decide(a),
        Command::Construct(a) => commands::construct(a),
        Command::Dump(a) => commands::dump(a),
        Command::Verify(a) => commands::verify(a),
        Command::Parse(a) => commands::parse(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
