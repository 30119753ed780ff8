use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use weilcount::lattice::DEFAULT_BUDGET;

mod commands;
mod render;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

/// Exact computations with Weil polynomials, isogeny-class counts and
/// group orders of abelian varieties over finite fields.
#[derive(Debug, Parser)]
#[command(name = "weilcount", version)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Directory for cached results.
    #[arg(long, global = true, value_name = "PATH")]
    cache_dir: Option<PathBuf>,
    /// Limit on exact candidate evaluations during enumeration.
    #[arg(long, default_value_t = DEFAULT_BUDGET, global = true,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Seed for the randomized computations.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact volume of the coefficient region, optionally with a Monte Carlo estimate.
    Volume {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Number of Monte Carlo samples.
        #[arg(long, value_name = "SAMPLES")]
        mc: Option<u64>,
    },
    /// Exact isogeny-class counts; `--report` adds the certified bounds.
    Count {
        q: Option<u64>,
        n: Option<usize>,
        #[arg(long)]
        report: bool,
        /// Also count Weil vectors with DIVISOR | a_n (1, p or s).
        #[arg(long)]
        divisor: Option<u64>,
        /// One row per prime power q in [QMIN, QMAX].
        #[arg(long, num_args = 3, value_names = ["QMIN", "QMAX", "N"], conflicts_with_all = ["q", "n"])]
        batch: Option<Vec<u64>>,
    },
    /// An ordinary Weil polynomial f with f(1) = M.
    Order { q: u64, n: usize, m: u64 },
    /// Weil membership, ordinarity and Newton polygon of a_1..a_n.
    Check {
        #[arg(long)]
        q: u64,
        #[arg(last = true, required = true, allow_hyphen_values = true, value_name = "COEFFICIENTS")]
        coefficients: Vec<i64>,
    },
    /// Randomized and exhaustive checks of the inequalities behind the bounds.
    VerifyBounds {
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
}

/// A failed command, mapped to an exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain { message: String, detail: Value },
    Budget(u64),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain { .. } => 3,
            Failure::Budget(_) => 4,
            Failure::Internal(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Domain { .. } => "domain",
            Failure::Budget(_) => "budget",
            Failure::Internal(_) => "internal",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Internal(m) => m.clone(),
            Failure::Domain { message, .. } => message.clone(),
            Failure::Budget(b) => format!(
                "more than {b} candidate evaluations required; raise --budget to continue"
            ),
        }
    }
}

impl From<weilcount::Error> for Failure {
    fn from(e: weilcount::Error) -> Self {
        match e {
            weilcount::Error::Domain(m) | weilcount::Error::Precondition(m) => Failure::Domain {
                message: m,
                detail: Value::Null,
            },
            weilcount::Error::Budget { budget } => Failure::Budget(budget),
            weilcount::Error::Invariant(m) => Failure::Internal(m),
        }
    }
}

/// What a command produced before the envelope is added.
pub struct Outcome {
    pub command: &'static str,
    pub params: Value,
    pub result: Value,
    pub verdicts: Value,
    pub cache_hit: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global()
            .expect("thread pool configured once");
    }
    let start = Instant::now();
    let (name, params) = commands::describe(&cli.command);
    match commands::run(&cli) {
        Ok(out) => {
            let doc = json!({
                "command": out.command,
                "params": out.params,
                "result": out.result,
                "verdicts": out.verdicts,
                "meta": meta(start, out.cache_hit),
            });
            print!("{}", render::render(cli.format, &doc));
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => Cli::command()
            .error(clap::error::ErrorKind::ValueValidation, msg)
            .exit(),
        Err(f) => {
            let doc = json!({
                "command": name,
                "params": params,
                "result": Value::Null,
                "verdicts": Value::Null,
                "error": {
                    "kind": f.kind(),
                    "message": f.message(),
                    "detail": match &f { Failure::Domain { detail, .. } => detail.clone(), _ => Value::Null },
                },
                "meta": meta(start, false),
            });
            match cli.format {
                Format::Json => println!("{}", render::canonical(&doc)),
                _ => eprintln!("error: {}", f.message()),
            }
            ExitCode::from(f.code())
        }
    }
}

pub fn meta(start: Instant, cache_hit: bool) -> Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "elapsed_ms": start.elapsed().as_millis() as u64,
        "cache_hit": cache_hit,
    })
}
