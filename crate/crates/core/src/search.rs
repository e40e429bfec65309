//! Budgeted, resumable execution of independent search tasks.
//!
//! A search is split into top-level prefixes. Each prefix is a task run to
//! completion by one worker; completed tasks are appended to a JSON-lines
//! checkpoint so an interrupted run can skip them on resume. Results are
//! returned in task order, so aggregation never depends on scheduling.

use std::cell::Cell;
use std::collections::{BTreeMap, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Result, ZsError};
use crate::group::AbelianGroup;
use crate::sequence::Sequence;

#[derive(Clone, Debug, Default)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(n: u64) -> Self {
        SearchBudget {
            max_nodes: Some(n),
            max_time: None,
        }
    }

    pub fn seconds(s: u64) -> Self {
        SearchBudget {
            max_nodes: None,
            max_time: Some(Duration::from_secs(s)),
        }
    }
}

/// Outcome of an exhaustive search.
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub group: AbelianGroup,
    pub target: String,
    pub value: Option<usize>,
    pub witness: Option<Sequence>,
    pub nodes_explored: u64,
    pub wall_time: Duration,
    pub budget_exhausted: bool,
    pub cap_hit: bool,
}

impl SearchReport {
    pub(crate) fn partial(group: &AbelianGroup, target: &str, nodes: u64, wall: Duration) -> Self {
        SearchReport {
            group: group.clone(),
            target: target.into(),
            value: None,
            witness: None,
            nodes_explored: nodes,
            wall_time: wall,
            budget_exhausted: true,
            cap_hit: false,
        }
    }

    /// JSON payload without the wall time, so equal searches serialize
    /// identically.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "group": self.group.to_string(),
            "target": self.target,
            "value": self.value,
            "witness": self.witness.as_ref().map(Sequence::to_json),
            "nodes_explored": self.nodes_explored,
            "budget_exhausted": self.budget_exhausted,
            "cap_hit": self.cap_hit,
        })
    }
}

/// What a finished task hands back.
#[derive(Clone, Debug)]
pub struct TaskOutcome {
    pub best_len: Option<usize>,
    pub witness: Option<Sequence>,
    pub nodes: u64,
    pub cap_hit: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaskRecord {
    pub prefix: Vec<usize>,
    pub best_len: Option<usize>,
    pub nodes: u64,
    pub witness: Option<Sequence>,
    pub cap_hit: bool,
}

#[derive(Serialize, Deserialize)]
struct RecordLine {
    prefix: Vec<usize>,
    best_len: Option<usize>,
    nodes: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<BTreeMap<usize, u32>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    cap_hit: bool,
}

#[derive(Serialize, Deserialize)]
struct HeaderLine {
    config_hash: String,
}

/// Hex SHA-256 of a configuration description.
pub fn config_hash(description: &str) -> String {
    Sha256::digest(description.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// An append-only JSON-lines checkpoint. The first line carries the
/// configuration hash; each further line is one completed prefix.
pub struct Checkpoint {
    path: PathBuf,
    completed: HashMap<Vec<usize>, TaskRecord>,
    file: Mutex<File>,
}

impl Checkpoint {
    /// Opens or creates a checkpoint. A missing or empty file starts fresh;
    /// a header with a different hash is refused.
    pub fn open(path: &Path, hash: &str, group: &AbelianGroup) -> Result<Self> {
        let mut completed = HashMap::new();
        let mut has_header = false;
        if path.exists() {
            let reader = BufReader::new(File::open(path)?);
            for (lineno, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let bad = |e: serde_json::Error| {
                    ZsError::Checkpoint(format!("{}:{}: {e}", path.display(), lineno + 1))
                };
                if !has_header {
                    let h: HeaderLine = serde_json::from_str(&line).map_err(bad)?;
                    if h.config_hash != hash {
                        return Err(ZsError::Checkpoint(format!(
                            "{}: configuration hash {} does not match this run ({hash})",
                            path.display(),
                            h.config_hash
                        )));
                    }
                    has_header = true;
                    continue;
                }
                let r: RecordLine = serde_json::from_str(&line).map_err(bad)?;
                let witness = match r.witness {
                    Some(m) => {
                        let mut mult = vec![0u32; group.order()];
                        for (g, c) in m {
                            if g >= mult.len() {
                                return Err(ZsError::Checkpoint(format!(
                                    "{}:{}: element index {g} out of range",
                                    path.display(),
                                    lineno + 1
                                )));
                            }
                            mult[g] = c;
                        }
                        Some(Sequence::from_multiplicity(group, mult)?)
                    }
                    None => None,
                };
                completed.insert(
                    r.prefix.clone(),
                    TaskRecord {
                        prefix: r.prefix,
                        best_len: r.best_len,
                        nodes: r.nodes,
                        witness,
                        cap_hit: r.cap_hit,
                    },
                );
            }
        }
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        if !has_header {
            writeln!(
                file,
                "{}",
                serde_json::to_string(&HeaderLine {
                    config_hash: hash.into()
                })?
            )?;
            file.flush()?;
        }
        Ok(Checkpoint {
            path: path.to_path_buf(),
            completed,
            file: Mutex::new(file),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn completed(&self) -> usize {
        self.completed.len()
    }

    fn append(&self, rec: &TaskRecord) -> Result<()> {
        let line = RecordLine {
            prefix: rec.prefix.clone(),
            best_len: rec.best_len,
            nodes: rec.nodes,
            witness: rec.witness.as_ref().map(|w| w.distinct().collect()),
            cap_hit: rec.cap_hit,
        };
        let mut f = self.file.lock().expect("checkpoint lock");
        writeln!(f, "{}", serde_json::to_string(&line)?)?;
        f.flush()?;
        Ok(())
    }
}

/// Shared budget state for one search.
pub struct TaskRunner<'c> {
    budget: SearchBudget,
    start: Instant,
    nodes: AtomicU64,
    stop: AtomicBool,
    checkpoint: Option<&'c Checkpoint>,
}

/// Per-task handle used by search code to charge nodes against the budget.
pub struct Control<'a> {
    runner: &'a TaskRunner<'a>,
    pending: Cell<u64>,
}

const TICK_BATCH: u64 = 256;

impl Control<'_> {
    /// Charges one node; returns false once the budget is spent.
    #[inline]
    pub fn tick(&self) -> bool {
        let p = self.pending.get() + 1;
        if p < TICK_BATCH {
            self.pending.set(p);
            return !self.runner.stop.load(Ordering::Relaxed);
        }
        self.pending.set(0);
        self.runner.charge(p)
    }
}

impl<'c> TaskRunner<'c> {
    pub fn new(budget: SearchBudget, checkpoint: Option<&'c Checkpoint>) -> Self {
        TaskRunner {
            budget,
            start: Instant::now(),
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            checkpoint,
        }
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    fn charge(&self, n: u64) -> bool {
        let total = self.nodes.fetch_add(n, Ordering::Relaxed) + n;
        let over_nodes = self.budget.max_nodes.is_some_and(|m| total > m);
        let over_time = self
            .budget
            .max_time
            .is_some_and(|t| self.start.elapsed() > t);
        if over_nodes || over_time {
            self.stop.store(true, Ordering::Relaxed);
        }
        !self.stop.load(Ordering::Relaxed)
    }

    /// Runs every task not already in the checkpoint. Returns the finished
    /// records in task order and whether the budget ran out first.
    pub fn run<F>(&self, tasks: &[Vec<usize>], f: F) -> Result<(Vec<TaskRecord>, bool)>
    where
        F: Fn(&[usize], &Control) -> Option<TaskOutcome> + Sync,
    {
        let results: Vec<Result<Option<TaskRecord>>> = tasks
            .par_iter()
            .map(|prefix| {
                if let Some(done) = self.checkpoint.and_then(|c| c.completed.get(prefix)) {
                    return Ok(Some(done.clone()));
                }
                if self.stop.load(Ordering::Relaxed) {
                    return Ok(None);
                }
                let ctl = Control {
                    runner: self,
                    pending: Cell::new(0),
                };
                let Some(out) = f(prefix, &ctl) else {
                    return Ok(None);
                };
                self.charge(ctl.pending.get());
                let rec = TaskRecord {
                    prefix: prefix.clone(),
                    best_len: out.best_len,
                    nodes: out.nodes,
                    witness: out.witness,
                    cap_hit: out.cap_hit,
                };
                if let Some(c) = self.checkpoint {
                    c.append(&rec)?;
                }
                Ok(Some(rec))
            })
            .collect();
        let mut records = Vec::with_capacity(tasks.len());
        let mut exhausted = false;
        for r in results {
            match r? {
                Some(rec) => records.push(rec),
                None => exhausted = true,
            }
        }
        Ok((records, exhausted))
    }
}
