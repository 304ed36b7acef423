//! `l4`: command-line front end for the rule compiler, the bounded model
//! checker and the legal-model reasoner.

mod asp;
mod classical;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Failure, Status};

#[derive(Parser)]
#[command(name = "l4", version, about = "Rule compiler, bounded model checker and legal-model reasoner")]
struct Cli {
    /// Worker threads for model search (default: one per core)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Variant {
    /// Restrict subordinate rules through their preconditions
    Precond,
    /// Restrict through derivability of lifted predicates
    Deriv,
}

#[derive(Args)]
pub struct Bounds {
    /// Carrier sizes, e.g. `Vehicle=1,Day=1,Road=1`
    #[arg(long, value_delimiter = ',', value_parser = output::parse_size)]
    sizes: Vec<(String, usize)>,
    /// Integers that integer positions range over (default: the literals of the problem)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    ints: Option<Vec<i64>>,
    /// Node budget of the model search
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a rule module, printing it back
    Parse {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Eliminate rule modifiers
    Transform {
        file: PathBuf,
        #[arg(long, value_enum)]
        variant: Variant,
        /// Print the complete transformed module
        #[arg(long, conflicts_with = "json")]
        emit_l4: bool,
        #[arg(long)]
        json: bool,
        /// Simplify preconditions under the class inclusions
        #[arg(long)]
        simplify: bool,
    },
    /// Print the inversion formula of a predicate
    Invert {
        file: PathBuf,
        #[arg(long)]
        predicate: String,
    },
    /// Emit an SMT-LIB script for an assertion
    EmitSmt {
        file: PathBuf,
        #[arg(long = "assert")]
        assertion: String,
        #[arg(short, long)]
        o: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "precond")]
        variant: Variant,
        /// Leave out inversion formulas
        #[arg(long)]
        no_inversions: bool,
    },
    /// Check an assertion by bounded model search
    Check {
        file: PathBuf,
        #[arg(long = "assert")]
        assertion: String,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, value_enum, default_value = "precond")]
        variant: Variant,
        /// Leave out inversion formulas
        #[arg(long)]
        no_inversions: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compare the models of both restriction variants
    Correspond {
        file: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        json: bool,
    },
    /// Emit the ASP encoding of a configuration
    EmitAsp {
        cfg: PathBuf,
        #[arg(short, long)]
        o: Option<PathBuf>,
    },
    /// Enumerate the legal models of a configuration
    LegalModels {
        cfg: PathBuf,
        /// Keep only subset-minimal models
        #[arg(long)]
        minimal_only: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compute the answer sets of a configuration's encoding or of an `.lp` program
    AnswerSets {
        file: PathBuf,
        /// Show only the `legally_valid` and `is_legal` atoms
        #[arg(long)]
        project: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check that every answer set of the encoding is a legal model
    VerifyLemma4 {
        cfg: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<Status, Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(format!("cannot start {n} threads: {e}")))?;
    }
    match cli.command {
        Command::Parse { file, json } => classical::parse(&file, json),
        Command::Transform { file, variant, emit_l4, json, simplify } => {
            classical::transform(&file, variant, emit_l4, json, simplify)
        }
        Command::Invert { file, predicate } => classical::invert(&file, &predicate),
        Command::EmitSmt { file, assertion, o, variant, no_inversions } => {
            classical::emit_smt(&file, &assertion, o.as_deref(), variant, no_inversions)
        }
        Command::Check { file, assertion, bounds, variant, no_inversions, json } => {
            classical::check(&file, &assertion, &bounds, variant, no_inversions, json)
        }
        Command::Correspond { file, bounds, json } => classical::correspond(&file, &bounds, json),
        Command::EmitAsp { cfg, o } => asp::emit(&cfg, o.as_deref()),
        Command::LegalModels { cfg, minimal_only, json } => asp::legal(&cfg, minimal_only, json),
        Command::AnswerSets { file, project, json } => asp::answer_sets(&file, project, json),
        Command::VerifyLemma4 { cfg, json } => asp::lemma4(&cfg, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(s) => ExitCode::from(s.code()),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
