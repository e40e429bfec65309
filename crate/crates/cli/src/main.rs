mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use report::{Failure, Outcome, Status, EXIT_USAGE};

/// Zero-sum invariants over finite abelian groups.
#[derive(Parser, Debug)]
#[command(name = "zslab", version)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Group moduli, e.g. `3,15`.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Sequence file (JSON with `group` and `terms` or `multiplicity`).
    #[arg(long, global = true)]
    pub seq: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, env = "ZSLAB_WORKERS")]
    pub workers: Option<usize>,
    #[arg(long, global = true)]
    pub budget_seconds: Option<u64>,
    /// Node budget for exhaustive searches.
    #[arg(long, global = true)]
    pub budget_nodes: Option<u64>,
    /// JSON-lines checkpoint for `c0` and `search-extremal`.
    #[arg(long, global = true)]
    pub checkpoint: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Invariant factors, order, exponent and subgroups.
    GroupInfo,
    /// Σ(S) of a sequence.
    Sigma,
    /// Regularity of a sequence.
    Regular,
    /// Whether a sequence is an additive basis.
    Basis,
    /// Davenport constant by formula or exhaustive search.
    Davenport {
        #[arg(long, value_enum, default_value_t = DavenportArg::Formula)]
        mode: DavenportArg,
    },
    /// Exact c₀(G).
    C0(SearchArgs),
    /// Longest regular sequence that is not an additive basis.
    SearchExtremal(SearchArgs),
    /// Vanishing assignment for Π (X^{gᵢ} − aᵢ).
    AlgebraCover,
    /// Sequence of the given length with no vanishing assignment.
    AlgebraDwitness(DwitnessArgs),
    /// Group-algebra commands.
    #[command(subcommand)]
    Algebra(AlgebraCommand),
    /// st(A) for `--set`, or st(Σ(S)) for `--seq`.
    Stabilizer {
        /// Elements as `;`-separated coordinate tuples, e.g. `0,1;2,14`.
        #[arg(long)]
        set: Option<String>,
    },
    /// Random instances of Kneser's inequality.
    KneserFuzz {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 48)]
        max_order: u64,
    },
    /// The extremal sequence over C₃ ⊕ C_{3q}.
    VerifyPaper {
        #[arg(long)]
        q: u64,
    },
    /// Random regular sequences over C₃ ⊕ C_{3q}, checked for being bases.
    MonteCarlo {
        #[arg(long, default_value_t = 5)]
        q: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Sample length; defaults to 3q + 3.
        #[arg(long)]
        length: Option<usize>,
        /// Also check the extremal sequence of length 3q + 2.
        #[arg(long)]
        plant_extremal: bool,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum AlgebraCommand {
    Cover,
    Dwitness(DwitnessArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// Length cap; defaults to 2·|G|.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Disable the C_p ⊕ C_p symmetry reduction.
    #[arg(long)]
    pub no_symmetry: bool,
}

#[derive(Args, Debug, Clone)]
pub struct DwitnessArgs {
    #[arg(long)]
    pub length: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum DavenportArg {
    Formula,
    Bruteforce,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::GroupInfo => "group-info",
            Command::Sigma => "sigma",
            Command::Regular => "regular",
            Command::Basis => "basis",
            Command::Davenport { .. } => "davenport",
            Command::C0(_) => "c0",
            Command::SearchExtremal(_) => "search-extremal",
            Command::AlgebraCover | Command::Algebra(AlgebraCommand::Cover) => "algebra-cover",
            Command::AlgebraDwitness(_) | Command::Algebra(AlgebraCommand::Dwitness(_)) => {
                "algebra-dwitness"
            }
            Command::Stabilizer { .. } => "stabilizer",
            Command::KneserFuzz { .. } => "kneser-fuzz",
            Command::VerifyPaper { .. } => "verify-paper",
            Command::MonteCarlo { .. } => "monte-carlo",
        }
    }

    /// Command parameters echoed in the report.
    fn params(&self) -> Value {
        match self {
            Command::Davenport { mode } => json!({"mode": format!("{mode:?}").to_lowercase()}),
            Command::C0(a) | Command::SearchExtremal(a) => {
                json!({"cap": a.cap, "symmetry": !a.no_symmetry})
            }
            Command::AlgebraDwitness(a) | Command::Algebra(AlgebraCommand::Dwitness(a)) => {
                json!({"length": a.length})
            }
            Command::Stabilizer { set } => json!({"set": set}),
            Command::KneserFuzz { trials, max_order } => {
                json!({"trials": trials, "max_order": max_order})
            }
            Command::VerifyPaper { q } => json!({"q": q}),
            Command::MonteCarlo {
                q,
                trials,
                length,
                plant_extremal,
            } => {
                json!({"q": q, "trials": trials, "length": length, "plant_extremal": plant_extremal})
            }
            _ => json!({}),
        }
    }
}

fn config_echo(cli: &Cli, workers: usize) -> Value {
    let c = &cli.common;
    json!({
        "group": c.group,
        "seq": c.seq,
        "seed": c.seed,
        "workers": workers,
        "budget_seconds": c.budget_seconds,
        "budget_nodes": c.budget_nodes,
        "checkpoint": c.checkpoint,
        "output": c.json,
        "params": cli.command.params(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = match cli.common.workers {
        Some(0) => {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
    {
        eprintln!("error: cannot start worker pool: {e}");
        return ExitCode::from(EXIT_USAGE);
    }

    let start = Instant::now();
    let outcome = match commands::run(&cli.common, &cli.command) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!(
                "error: {msg}\n\nRun `zslab {} --help` for the valid flags.",
                cli.command.name()
            );
            return ExitCode::from(EXIT_USAGE);
        }
        Err(Failure::Math(msg)) => Outcome {
            status: Status::Counterexample,
            claim: None,
            result: json!({"error": msg}),
        },
        Err(Failure::Budget { message, partial }) => {
            eprintln!("{message}");
            Outcome {
                status: Status::BudgetExhausted,
                claim: None,
                result: json!({"error": message, "partial": partial}),
            }
        }
    };
    let report = report::envelope(
        cli.command.name(),
        config_echo(&cli, workers),
        &outcome,
        start.elapsed(),
    );
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    match &cli.common.json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(outcome.status.exit_code())
}
