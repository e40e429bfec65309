//! Davenport constants.

use std::collections::HashMap;
use std::time::Instant;

use crate::error::{Result, ZsError};
use crate::group::AbelianGroup;
use crate::search::{SearchBudget, SearchReport};
use crate::sequence::Sequence;
use crate::set::ElementSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DavenportMode {
    Formula,
    BruteForce,
}

/// `D(G)` by the rank ≤ 2 formula `n₁ + n₂ − 1` (cyclic: `n`) or by search.
pub fn davenport(group: &AbelianGroup, mode: DavenportMode) -> Result<usize> {
    match mode {
        DavenportMode::Formula => davenport_formula(group),
        DavenportMode::BruteForce => davenport_search(group, &SearchBudget::unlimited())?
            .value
            .ok_or_else(|| ZsError::Invariant("search finished without a value".into())),
    }
}

pub fn davenport_formula(group: &AbelianGroup) -> Result<usize> {
    match group.factors() {
        [n] => Ok(*n as usize),
        [n1, n2] => Ok((n1 + n2 - 1) as usize),
        f => Err(ZsError::FormulaUnavailable { rank: f.len() }),
    }
}

struct ZeroSumFree<'a> {
    group: &'a AbelianGroup,
    memo: HashMap<ElementSet, u16>,
    budget: &'a SearchBudget,
    start: Instant,
    nodes: u64,
}

impl ZeroSumFree<'_> {
    /// Longest zero-sum free extension of any sequence `S` with
    /// `Σ₀(S) = a`. The future of `S` depends only on `Σ₀(S)`, and each
    /// term that keeps the sequence zero-sum free strictly enlarges it, so
    /// `|G| − |a|` bounds the answer.
    fn longest(&mut self, a: &ElementSet) -> Result<u16> {
        if let Some(&v) = self.memo.get(a) {
            return Ok(v);
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) {
            let over_nodes = self.budget.max_nodes.is_some_and(|m| self.nodes > m);
            let over_time = self
                .budget
                .max_time
                .is_some_and(|t| self.start.elapsed() > t);
            if over_nodes || over_time {
                return Err(ZsError::SearchBudgetExceeded(Box::new(
                    SearchReport::partial(
                        self.group,
                        "davenport",
                        self.nodes,
                        self.start.elapsed(),
                    ),
                )));
            }
        }
        let n = self.group.order();
        let bound = (n - a.len()) as u16;
        let mut best = 0u16;
        for g in 1..n {
            if best == bound {
                break;
            }
            if a.contains(self.group.neg(g)) {
                continue;
            }
            let next = self.extend(a, g);
            best = best.max(1 + self.longest(&next)?);
        }
        self.memo.insert(a.clone(), best);
        Ok(best)
    }

    fn extend(&self, a: &ElementSet, g: usize) -> ElementSet {
        let mut next = self.group.translate(a, g);
        next.union_with(a);
        next
    }
}

/// Exhaustive `D(G)`: one more than the longest zero-sum free sequence,
/// found by memoized search over the reachable sets `Σ₀(S)`. The witness is
/// the first longest sequence in index order.
pub fn davenport_search(group: &AbelianGroup, budget: &SearchBudget) -> Result<SearchReport> {
    let mut z = ZeroSumFree {
        group,
        memo: HashMap::new(),
        budget,
        start: Instant::now(),
        nodes: 0,
    };
    let root = ElementSet::singleton(group.order(), 0);
    let d = z.longest(&root)?;

    let mut witness = Sequence::new(group);
    let mut a = root;
    let mut remaining = d;
    while remaining > 0 {
        let g = (1..group.order())
            .find(|&g| {
                !a.contains(group.neg(g))
                    && z.memo.get(&z.extend(&a, g)).copied().unwrap_or(0) + 1 == remaining
            })
            .ok_or_else(|| ZsError::Invariant("lost the optimal branch".into()))?;
        a = z.extend(&a, g);
        witness.push(g);
        remaining -= 1;
    }
    debug_assert!(!witness.sigma_set().contains(0));
    Ok(SearchReport {
        group: group.clone(),
        target: "davenport".into(),
        value: Some(d as usize + 1),
        witness: Some(witness),
        nodes_explored: z.nodes,
        wall_time: z.start.elapsed(),
        budget_exhausted: false,
        cap_hit: false,
    })
}
