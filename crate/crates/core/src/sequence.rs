//! Sequences over a group, stored as multiplicity vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZsError};
use crate::group::{AbelianGroup, GroupElement, Subgroup, SubgroupLattice};
use crate::set::ElementSet;

/// Restarts allowed in [`random_regular`] before giving up.
pub const RANDOM_REGULAR_RESTARTS: u64 = 1_000_000;

/// A finite multiset of group elements. Term order never matters.
#[derive(Clone, PartialEq, Eq)]
pub struct Sequence {
    group: AbelianGroup,
    mult: Vec<u32>,
    len: usize,
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sequence[{}](", self.group)?;
        let mut first = true;
        for (g, m) in self.distinct() {
            if !first {
                write!(f, "·")?;
            }
            first = false;
            let e = self.group.element(g).unwrap();
            if m == 1 {
                write!(f, "{e}")?;
            } else {
                write!(f, "{e}^{m}")?;
            }
        }
        write!(f, ")")
    }
}

impl Sequence {
    pub fn new(group: &AbelianGroup) -> Self {
        Sequence {
            group: group.clone(),
            mult: vec![0; group.order()],
            len: 0,
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(group: &AbelianGroup, terms: I) -> Self {
        let mut s = Self::new(group);
        for g in terms {
            s.push(g);
        }
        s
    }

    pub fn from_elements(group: &AbelianGroup, terms: &[GroupElement]) -> Result<Self> {
        let idx = terms
            .iter()
            .map(|t| group.index_of(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_indices(group, idx))
    }

    pub fn from_multiplicity(group: &AbelianGroup, mult: Vec<u32>) -> Result<Self> {
        if mult.len() != group.order() {
            return Err(ZsError::InvalidSequence(format!(
                "multiplicity vector has {} entries, group order is {}",
                mult.len(),
                group.order()
            )));
        }
        let len = mult.iter().map(|&m| m as usize).sum();
        Ok(Sequence {
            group: group.clone(),
            mult,
            len,
        })
    }

    /// `g^k`
    pub fn power(group: &AbelianGroup, g: usize, k: u32) -> Self {
        let mut s = Self::new(group);
        s.mult[g] = k;
        s.len = k as usize;
        s
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn multiplicity(&self, g: usize) -> u32 {
        self.mult[g]
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    pub fn push(&mut self, g: usize) {
        self.mult[g] += 1;
        self.len += 1;
    }

    pub fn push_n(&mut self, g: usize, k: u32) {
        self.mult[g] += k;
        self.len += k as usize;
    }

    /// Removes one copy of `g`; returns false if `g` does not occur.
    pub fn remove(&mut self, g: usize) -> bool {
        if self.mult[g] == 0 {
            return false;
        }
        self.mult[g] -= 1;
        self.len -= 1;
        true
    }

    /// `S·g`
    pub fn with_term(&self, g: usize) -> Self {
        let mut s = self.clone();
        s.push(g);
        s
    }

    /// `S·T`
    pub fn concat(&self, other: &Sequence) -> Self {
        let mut s = self.clone();
        for (g, m) in other.distinct() {
            s.push_n(g, m);
        }
        s
    }

    /// Distinct terms with their multiplicities, in index order.
    pub fn distinct(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(g, &m)| (g, m))
    }

    /// Terms listed with repetition, in non-decreasing index order.
    pub fn terms(&self) -> Vec<usize> {
        self.distinct()
            .flat_map(|(g, m)| std::iter::repeat_n(g, m as usize))
            .collect()
    }

    pub fn support(&self) -> ElementSet {
        ElementSet::from_indices(self.group.order(), self.distinct().map(|(g, _)| g))
    }

    /// `T | S` as multisets.
    pub fn divides(&self, other: &Sequence) -> bool {
        self.group == other.group && self.mult.iter().zip(&other.mult).all(|(a, b)| a <= b)
    }

    /// `S·T⁻¹`; fails unless `T | S`.
    pub fn without(&self, sub: &Sequence) -> Result<Sequence> {
        if !sub.divides(self) {
            return Err(ZsError::InvalidSequence(format!(
                "{sub:?} is not a subsequence of {self:?}"
            )));
        }
        let mult = self
            .mult
            .iter()
            .zip(&sub.mult)
            .map(|(a, b)| a - b)
            .collect();
        Sequence::from_multiplicity(&self.group, mult)
    }

    /// `σ(S)`
    pub fn sigma_sum(&self) -> usize {
        self.distinct().fold(0, |acc, (g, m)| {
            self.group.add(acc, self.group.scalar_mul(m as i64, g))
        })
    }

    /// `Σ(S)`: sums of nonempty subsequences. Each term is applied as
    /// `A ← A ∪ (A + g) ∪ {g}`.
    pub fn sigma_set(&self) -> ElementSet {
        let mut acc = ElementSet::empty(self.group.order());
        for (g, m) in self.distinct() {
            for _ in 0..m {
                let mut shifted = self.group.translate(&acc, g);
                shifted.insert(g);
                acc.union_with(&shifted);
            }
        }
        acc
    }

    /// `Σ₀(S) = Σ(S) ∪ {0}`
    pub fn sigma0_set(&self) -> ElementSet {
        let mut s = self.sigma_set();
        s.insert(0);
        s
    }

    /// Number of terms lying in `set`.
    pub fn count_in(&self, set: &ElementSet) -> usize {
        set.iter().map(|g| self.mult[g] as usize).sum()
    }

    /// `S_H`
    pub fn restrict(&self, h: &Subgroup) -> Sequence {
        self.restrict_to_set(&h.members)
    }

    pub fn restrict_to_set(&self, set: &ElementSet) -> Sequence {
        let mult = self
            .mult
            .iter()
            .enumerate()
            .map(|(g, &m)| if set.contains(g) { m } else { 0 })
            .collect();
        Sequence::from_multiplicity(&self.group, mult).unwrap()
    }

    /// Checks `|S_H| ≤ |H| − 1` for every proper subgroup `H`. On failure the
    /// violating subgroup of smallest order is reported.
    pub fn regularity(&self) -> Result<Regularity> {
        let lattice = self.group.lattice()?;
        for &k in lattice.proper() {
            let h = &lattice.subgroups[k];
            let terms = self.count_in(&h.members);
            if terms + 1 > h.order {
                return Ok(Regularity::Violated {
                    subgroup: h.clone(),
                    terms,
                });
            }
        }
        Ok(Regularity::Regular)
    }

    pub fn is_regular(&self) -> Result<bool> {
        Ok(self.regularity()?.is_regular())
    }

    /// `Σ(S) = G`
    pub fn is_basis(&self) -> bool {
        self.sigma_set().is_full()
    }

    pub fn missing_elements(&self) -> ElementSet {
        self.sigma_set().complement()
    }

    pub fn to_file(&self) -> SequenceFile {
        SequenceFile {
            group: self.group.to_string(),
            length: Some(self.len),
            terms: None,
            multiplicity: Some(self.distinct().collect()),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_file()).expect("sequence serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regularity {
    Regular,
    Violated { subgroup: Subgroup, terms: usize },
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        matches!(self, Regularity::Regular)
    }
}

/// On-disk sequence format. Either `terms` (repeated terms listed
/// explicitly) or `multiplicity` (element index → count) must be given.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequenceFile {
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<GroupElement>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<BTreeMap<usize, u32>>,
}

impl SequenceFile {
    pub fn into_sequence(self) -> Result<Sequence> {
        let group: AbelianGroup = self.group.parse()?;
        self.into_sequence_over(&group)
    }

    /// Decodes against an already-built group, which must match the file's.
    pub fn into_sequence_over(self, group: &AbelianGroup) -> Result<Sequence> {
        let declared: AbelianGroup = self.group.parse()?;
        if &declared != group {
            return Err(ZsError::InvalidSequence(format!(
                "sequence is over {declared}, expected {group}"
            )));
        }
        let mut seq = Sequence::new(group);
        match (self.terms, self.multiplicity) {
            (Some(_), Some(_)) => {
                return Err(ZsError::InvalidSequence(
                    "give either terms or multiplicity, not both".into(),
                ))
            }
            (None, None) => {
                return Err(ZsError::InvalidSequence(
                    "missing terms or multiplicity".into(),
                ))
            }
            (Some(terms), None) => {
                for t in &terms {
                    seq.push(group.index_of(t)?);
                }
            }
            (None, Some(mult)) => {
                for (g, m) in mult {
                    if g >= group.order() {
                        return Err(ZsError::InvalidElement(format!(
                            "index {g} out of range for group of order {}",
                            group.order()
                        )));
                    }
                    seq.push_n(g, m);
                }
            }
        }
        if let Some(l) = self.length {
            if l != seq.len() {
                return Err(ZsError::InvalidSequence(format!(
                    "declared length {l} but {} terms given",
                    seq.len()
                )));
            }
        }
        Ok(seq)
    }
}

/// Incremental per-subgroup term counters for regularity checks during
/// search. Pushing a term touches only the proper subgroups containing it.
#[derive(Clone, Debug)]
pub struct RegularityCounter {
    lattice: Arc<SubgroupLattice>,
    counts: Vec<u32>,
    caps: Vec<u32>,
}

impl RegularityCounter {
    pub fn new(group: &AbelianGroup) -> Result<Self> {
        let lattice = group.lattice()?.clone();
        let caps = lattice
            .subgroups
            .iter()
            .map(|h| (h.order - 1) as u32)
            .collect();
        Ok(RegularityCounter {
            counts: vec![0; lattice.subgroups.len()],
            lattice,
            caps,
        })
    }

    /// Adds `g` if the result stays regular; returns whether it was added.
    pub fn try_push(&mut self, g: usize) -> bool {
        let hs = self.lattice.proper_containing(g);
        if hs
            .iter()
            .any(|&h| self.counts[h as usize] >= self.caps[h as usize])
        {
            return false;
        }
        for &h in hs {
            self.counts[h as usize] += 1;
        }
        true
    }

    /// Undoes a successful [`try_push`](Self::try_push).
    pub fn pop(&mut self, g: usize) {
        for &h in self.lattice.proper_containing(g) {
            self.counts[h as usize] -= 1;
        }
    }

    pub fn reset(&mut self) {
        self.counts.iter_mut().for_each(|c| *c = 0);
    }
}

/// Draws a regular sequence of the given length by rejection: terms are
/// uniform over the nonzero elements and the draw restarts as soon as the
/// prefix stops being regular.
pub fn random_regular(group: &AbelianGroup, length: usize, seed: u64) -> Result<Sequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_regular_extending(
        &Sequence::new(group),
        length,
        &mut rng,
        RANDOM_REGULAR_RESTARTS,
    )
}

/// Like [`random_regular`], but every sample contains `prefix`.
pub fn random_regular_extending<R: Rng>(
    prefix: &Sequence,
    length: usize,
    rng: &mut R,
    max_restarts: u64,
) -> Result<Sequence> {
    let group = prefix.group();
    if group.order() < 2 {
        return Err(ZsError::InvalidGroup("trivial group".into()));
    }
    let mut counter = RegularityCounter::new(group)?;
    for g in prefix.terms() {
        if !counter.try_push(g) {
            return Err(ZsError::PreconditionFailed(format!(
                "prefix {prefix:?} is not regular"
            )));
        }
    }
    let base = counter.clone();
    let mut restarts = 0u64;
    'outer: loop {
        let mut seq = prefix.clone();
        counter.clone_from(&base);
        while seq.len() < length {
            let g = rng.gen_range(1..group.order());
            if !counter.try_push(g) {
                restarts += 1;
                if restarts >= max_restarts {
                    return Err(ZsError::RetryBudgetExceeded { length, restarts });
                }
                continue 'outer;
            }
            seq.push(g);
        }
        return Ok(seq);
    }
}
