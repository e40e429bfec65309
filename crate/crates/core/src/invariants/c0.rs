//! Exact `c₀(G)` by exhaustive search for the longest regular sequence that
//! is not an additive basis.
//!
//! Regularity is inherited by subsequences, so if every regular sequence of
//! length `t` is a basis then so is every longer one; `c₀` is therefore the
//! maximum non-basis length plus one.

use std::cmp::Ordering;
use std::path::PathBuf;

use crate::error::{Result, ZsError};
use crate::group::AbelianGroup;
use crate::search::{
    config_hash, Checkpoint, Control, SearchBudget, SearchReport, TaskOutcome, TaskRecord,
    TaskRunner,
};
use crate::sequence::{RegularityCounter, Sequence};
use crate::set::ElementSet;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Length cap; defaults to `2·|G|`.
    pub cap: Option<usize>,
    pub budget: SearchBudget,
    pub checkpoint: Option<PathBuf>,
    /// Use the `GL₂(F_p)` reduction on `C_p ⊕ C_p`.
    pub symmetry: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            cap: None,
            budget: SearchBudget::unlimited(),
            checkpoint: None,
            symmetry: true,
        }
    }
}

/// `Some(p)` if the group is `C_p ⊕ C_p` with `p` prime.
fn elementary_rank2(group: &AbelianGroup) -> Option<u64> {
    match group.factors() {
        [p, q] if p == q && group.smallest_prime() == *p => Some(*p),
        _ => None,
    }
}

/// Top-level tasks. Without symmetry: the empty sequence, then one task per
/// smallest term `x`, extended by terms `≥ x`.
///
/// On `C_p ⊕ C_p` every nonempty sequence maps under `GL₂(F_p)` either into
/// the line `⟨e₁⟩` containing `e₁`, or (if it spans `G`) to one containing
/// both `e₁` and `e₂`. The tasks are then: `[e₁]` extended inside `⟨e₁⟩`;
/// `[e₁, e₂]` alone; `[e₁, e₂, x]` extended by terms `≥ x`.
fn tasks(group: &AbelianGroup, symmetric: bool) -> Vec<Vec<usize>> {
    let n = group.order();
    let mut t = vec![vec![]];
    if symmetric {
        let (e1, e2) = basis_pair(group);
        t.push(vec![e1]);
        t.push(vec![e1, e2]);
        t.extend((1..n).map(|x| vec![e1, e2, x]));
    } else {
        t.extend((1..n).map(|x| vec![x]));
    }
    t
}

fn basis_pair(group: &AbelianGroup) -> (usize, usize) {
    (
        group.index_of_reduced(&[1, 0]).unwrap(),
        group.index_of_reduced(&[0, 1]).unwrap(),
    )
}

/// Terms a task prefix may be extended by, in canonical order.
fn extension_for(group: &AbelianGroup, symmetric: bool, prefix: &[usize]) -> Vec<usize> {
    let n = group.order();
    if !symmetric {
        return match prefix {
            [] => vec![],
            [x] => (*x..n).collect(),
            _ => unreachable!(),
        };
    }
    match prefix {
        [] | [_, _] => vec![],
        [e1] => group
            .cyclic_subgroup(*e1)
            .members
            .iter()
            .filter(|&g| g != 0)
            .collect(),
        [_, _, x] => (*x..n).collect(),
        _ => unreachable!(),
    }
}

/// `(length, multiplicity vector)`; larger length wins, then the
/// lexicographically smaller vector.
fn better(a: &(usize, Vec<u32>), b: &(usize, Vec<u32>)) -> bool {
    match a.0.cmp(&b.0) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a.1 < b.1,
    }
}

struct Dfs<'a, 'c> {
    group: &'a AbelianGroup,
    allowed: Vec<usize>,
    counter: RegularityCounter,
    seq: Sequence,
    best: Option<(usize, Vec<u32>)>,
    cap: usize,
    cap_hit: bool,
    nodes: u64,
    ctl: &'a Control<'c>,
}

impl Dfs<'_, '_> {
    fn consider(&mut self, sigma: &ElementSet) {
        if sigma.is_full() {
            return;
        }
        let len = self.seq.len();
        if self.best.as_ref().is_some_and(|b| b.0 > len) {
            return;
        }
        let cand = (len, self.seq.multiplicities().to_vec());
        if self.best.as_ref().is_none_or(|b| better(&cand, b)) {
            self.best = Some(cand);
        }
    }

    /// Returns false when the budget runs out.
    fn run(&mut self, start: usize, sigma: &ElementSet) -> bool {
        for pos in start..self.allowed.len() {
            if !self.ctl.tick() {
                return false;
            }
            self.nodes += 1;
            let g = self.allowed[pos];
            if !self.counter.try_push(g) {
                continue;
            }
            // Σ(S·g) = Σ(S) ∪ (g + Σ₀(S))
            let mut next = self.group.translate(sigma, g);
            next.insert(g);
            next.union_with(sigma);
            self.seq.push(g);
            self.consider(&next);
            let saturated = next.len() + usize::from(!next.contains(0)) == next.universe();
            let mut ok = true;
            if !saturated {
                if self.seq.len() >= self.cap {
                    self.cap_hit = true;
                } else {
                    ok = self.run(pos, &next);
                }
            }
            self.seq.remove(g);
            self.counter.pop(g);
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Longest regular non-basis sequence over `G`, with a witness that is the
/// lexicographically smallest multiplicity vector among those explored.
pub fn longest_regular_nonbasis(
    group: &AbelianGroup,
    opts: &SearchOptions,
) -> Result<SearchReport> {
    let n = group.order();
    let cap = opts.cap.unwrap_or(2 * n);
    let symmetric = opts.symmetry && elementary_rank2(group).is_some();
    // Build the lattice before spawning workers.
    RegularityCounter::new(group)?;

    let hash = config_hash(&format!(
        "longest_regular_nonbasis|{group}|cap={cap}|symmetry={symmetric}"
    ));
    let checkpoint = opts
        .checkpoint
        .as_ref()
        .map(|p| Checkpoint::open(p, &hash, group))
        .transpose()?;
    let runner = TaskRunner::new(opts.budget.clone(), checkpoint.as_ref());
    let tasks = tasks(group, symmetric);

    let (records, exhausted) = runner.run(&tasks, |prefix, ctl| {
        let mut counter = RegularityCounter::new(group).expect("lattice cached");
        let mut seq = Sequence::new(group);
        let mut sigma = ElementSet::empty(n);
        for &g in prefix {
            if !counter.try_push(g) {
                return Some(TaskOutcome {
                    best_len: None,
                    witness: None,
                    nodes: 1,
                    cap_hit: false,
                });
            }
            let mut next = group.translate(&sigma, g);
            next.insert(g);
            next.union_with(&sigma);
            sigma = next;
            seq.push(g);
        }
        let mut dfs = Dfs {
            group,
            allowed: extension_for(group, symmetric, prefix),
            counter,
            seq,
            best: None,
            cap,
            cap_hit: false,
            nodes: 1,
            ctl,
        };
        dfs.consider(&sigma);
        let saturated = sigma.len() + usize::from(!sigma.contains(0)) == n;
        if !saturated && !dfs.allowed.is_empty() {
            if dfs.seq.len() >= cap {
                dfs.cap_hit = true;
            } else if !dfs.run(0, &sigma) {
                return None;
            }
        }
        let witness = dfs
            .best
            .as_ref()
            .map(|(_, m)| Sequence::from_multiplicity(group, m.clone()).unwrap());
        Some(TaskOutcome {
            best_len: dfs.best.map(|b| b.0),
            witness,
            nodes: dfs.nodes,
            cap_hit: dfs.cap_hit,
        })
    })?;

    let nodes: u64 = records.iter().map(|r| r.nodes).sum();
    if exhausted {
        return Err(ZsError::SearchBudgetExceeded(Box::new(
            SearchReport::partial(group, "longest_regular_nonbasis", nodes, runner.elapsed()),
        )));
    }
    Ok(aggregate(group, &records, runner.elapsed()))
}

fn aggregate(
    group: &AbelianGroup,
    records: &[TaskRecord],
    wall: std::time::Duration,
) -> SearchReport {
    let mut best: Option<(usize, Vec<u32>)> = None;
    let mut cap_hit = false;
    let mut nodes = 0;
    for r in records {
        nodes += r.nodes;
        cap_hit |= r.cap_hit;
        if let (Some(len), Some(w)) = (r.best_len, &r.witness) {
            let cand = (len, w.multiplicities().to_vec());
            if best.as_ref().is_none_or(|b| better(&cand, b)) {
                best = Some(cand);
            }
        }
    }
    let witness = best
        .as_ref()
        .map(|(_, m)| Sequence::from_multiplicity(group, m.clone()).unwrap());
    SearchReport {
        group: group.clone(),
        target: "longest_regular_nonbasis".into(),
        value: if cap_hit { None } else { best.map(|b| b.0) },
        witness: if cap_hit { None } else { witness },
        nodes_explored: nodes,
        wall_time: wall,
        budget_exhausted: false,
        cap_hit,
    }
}

/// `c₀(G)` = longest regular non-basis length + 1.
pub fn c0_exact(group: &AbelianGroup, opts: &SearchOptions) -> Result<usize> {
    let report = longest_regular_nonbasis(group, opts)?;
    if report.cap_hit {
        return Err(ZsError::CapReached {
            cap: opts.cap.unwrap_or(2 * group.order()),
        });
    }
    report
        .value
        .map(|v| v + 1)
        .ok_or_else(|| ZsError::Invariant("search finished without a value".into()))
}
