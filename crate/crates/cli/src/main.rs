//! `oresme`: tables, evaluation, identity verification, analytic probes,
//! DSL checking and strategy benchmarks.
//!
//! Exit codes: 0 when every outcome matches expectations, 1 on an unexpected
//! outcome, 2 on a usage error. Data goes to stdout, diagnostics to stderr.

mod commands;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use oresme_core::bench::Strategy;
use oresme_core::identities::Profile;
use oresme_core::seq::Provenance;

/// Environment variable capping the worker count when `--jobs` is absent.
pub const JOBS_ENV: &str = "ORESME_JOBS";

#[derive(Parser, Debug)]
#[command(name = "oresme", version, about = "Exact Oresme polynomial toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = JOBS_ENV, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// O_n (or O_n') for a range of indices.
    Table(TableArgs),
    /// One value O_n(x) at a rational point.
    Eval(EvalArgs),
    /// Check catalog identities.
    Verify(VerifyArgs),
    /// Cosine-product reconstruction of x^n O_n(x).
    Roots(RootsArgs),
    /// Ratio-limit probe O_{n+1}(x)/O_n(x).
    Limit(LimitArgs),
    /// Time evaluation strategies and cross-check their digests.
    Bench(BenchArgs),
    /// Identity files written in the DSL.
    Dsl {
        #[command(subcommand)]
        command: DslCommand,
    },
}

#[derive(Subcommand, Debug)]
enum DslCommand {
    /// Parse and verify every identity in FILE.
    Check(DslCheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProvenanceArg {
    Recurrence,
    Closed,
    Matrix,
}

impl From<ProvenanceArg> for Provenance {
    fn from(p: ProvenanceArg) -> Self {
        match p {
            ProvenanceArg::Recurrence => Provenance::Recurrence,
            ProvenanceArg::Closed => Provenance::Closed,
            ProvenanceArg::Matrix => Provenance::Matrix,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Quick,
    Full,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Quick => Profile::Quick,
            ProfileArg::Full => Profile::Full,
        }
    }
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub from: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: i64,
    /// Tabulate O_n' instead of O_n.
    #[arg(long)]
    pub derivative: bool,
    /// Also evaluate each row at this rational point (`p` or `p/q`).
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, value_enum, default_value_t = ProvenanceArg::Recurrence)]
    pub provenance: ProvenanceArg,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub n: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// recurrence, matrix, closed or binet.
    #[arg(long, default_value = "recurrence", value_parser = parse_strategy)]
    pub mode: Strategy,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("which").required(true).args(["id", "all"])))]
pub struct VerifyArgs {
    #[arg(long)]
    pub id: Option<String>,
    #[arg(long)]
    pub all: bool,
    #[arg(long, value_enum, default_value_t = ProfileArg::Quick)]
    pub profile: ProfileArg,
    /// Override one parameter range, e.g. `--range n=1..40` (with --id only).
    #[arg(long, requires = "id", allow_hyphen_values = true)]
    pub range: Vec<String>,
    /// Check with x fixed at this rational (with --id only; `BINET` is accepted).
    #[arg(long, requires = "id", allow_hyphen_values = true)]
    pub at: Option<String>,
}

#[derive(Args, Debug)]
pub struct RootsArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct LimitArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, default_value_t = 60)]
    pub steps: u64,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated strategies.
    #[arg(long, value_delimiter = ',', default_value = "recurrence,matrix,closed,binet", value_parser = parse_strategy)]
    pub modes: Vec<Strategy>,
    /// Comma-separated indices.
    #[arg(long = "n-list", value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub n_list: Vec<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Timed repetitions per (strategy, n); at least 3.
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
}

#[derive(Args, Debug)]
pub struct DslCheckArgs {
    pub file: std::path::PathBuf,
    /// Override a variable's range in every identity declaring it, e.g. `--range n=1..40`.
    #[arg(long, allow_hyphen_values = true)]
    pub range: Vec<String>,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

/// Failure modes that end a command early.
pub enum Failure {
    Usage(String),
    Runtime(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.into()).build_global() {
            eprintln!("error: cannot configure {jobs} workers: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Table(a) => commands::table(a),
        Command::Eval(a) => commands::eval(a),
        Command::Verify(a) => commands::verify(a),
        Command::Roots(a) => commands::roots(a),
        Command::Limit(a) => commands::limit(a),
        Command::Bench(a) => commands::bench(a),
        Command::Dsl {
            command: DslCommand::Check(a),
        } => commands::dsl_check(a),
    };
    match result {
        Ok(out) => {
            if let Err(e) = out.emit(cli.format) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            for line in &out.diagnostics {
                eprintln!("{line}");
            }
            ExitCode::from(out.exit)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
