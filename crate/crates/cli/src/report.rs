//! Report envelope and exit codes.

use std::time::Duration;

use serde_json::{json, Value};
use zslab_core::ZsError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_MATH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A counterexample, a rejected certificate, or a failed check.
    Counterexample,
    BudgetExhausted,
    /// The length cap was reached before the search could decide.
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Counterexample => "counterexample",
            Status::BudgetExhausted => "budget_exhausted",
            Status::Unknown => "unknown",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => EXIT_OK,
            Status::Counterexample => EXIT_MATH,
            Status::BudgetExhausted | Status::Unknown => EXIT_BUDGET,
        }
    }
}

/// What a command hands back before the envelope is added.
pub struct Outcome {
    pub status: Status,
    pub claim: Option<String>,
    pub result: Value,
}

impl Outcome {
    pub fn ok(claim: Option<String>, result: Value) -> Self {
        Outcome {
            status: Status::Ok,
            claim,
            result,
        }
    }

    /// `Ok` when `holds`, else `Counterexample`.
    pub fn check(holds: bool, claim: Option<String>, result: Value) -> Self {
        Outcome {
            status: if holds {
                Status::Ok
            } else {
                Status::Counterexample
            },
            claim,
            result,
        }
    }
}

/// Failure of a command, already sorted into an exit class.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Budget { message: String, partial: Value },
    Math(String),
}

impl From<ZsError> for Failure {
    fn from(e: ZsError) -> Self {
        match e {
            ZsError::SearchBudgetExceeded(r) => Failure::Budget {
                message: format!("search budget exhausted after {} nodes", r.nodes_explored),
                partial: r.to_json(),
            },
            ZsError::EnumerationBudgetExceeded { .. }
            | ZsError::RetryBudgetExceeded { .. }
            | ZsError::CapReached { .. } => Failure::Budget {
                message: e.to_string(),
                partial: Value::Null,
            },
            ZsError::CosetNotFound(_) | ZsError::Invariant(_) => Failure::Math(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

pub fn envelope(command: &str, config: Value, outcome: &Outcome, wall: Duration) -> Value {
    json!({
        "tool": "zslab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "claim": outcome.claim,
        "status": outcome.status.as_str(),
        "result": outcome.result,
        "timing": {"wall_seconds": wall.as_secs_f64()},
    })
}
