//! Stabilizers, Kneser's inequality, and exhaustive checks of the inverse
//! theorems used for rank-2 groups.

use crate::error::{Result, ZsError};
use crate::group::{AbelianGroup, Subgroup};
use crate::invariants::davenport::{davenport, DavenportMode};
use crate::sequence::{RegularityCounter, Sequence};
use crate::set::ElementSet;

/// `st(A) = {g : g + A = A}`
pub fn stabilizer(group: &AbelianGroup, a: &ElementSet) -> Result<Subgroup> {
    let Some(a0) = a.first() else {
        return Err(ZsError::EmptySet);
    };
    // g + a₀ ∈ A, so only g ∈ A − a₀ can stabilize A.
    let candidates = a.iter().map(|x| group.sub(x, a0));
    let members = ElementSet::from_indices(
        group.order(),
        candidates.filter(|&g| a.iter().all(|x| a.contains(group.add(x, g)))),
    );
    group.subgroup_from_members(members)
}

#[derive(Clone, Debug)]
pub struct KneserReport {
    pub lhs: i64,
    pub rhs: i64,
    pub stabilizer: Subgroup,
    pub holds: bool,
}

/// Evaluates `|A₁+…+A_r| ≥ Σ|Aᵢ+H| − (r−1)|H|` with `H = st(A₁+…+A_r)`.
pub fn kneser_check(group: &AbelianGroup, sets: &[ElementSet]) -> Result<KneserReport> {
    if sets.is_empty() || sets.iter().any(ElementSet::is_empty) {
        return Err(ZsError::EmptySet);
    }
    let sum = sets[1..]
        .iter()
        .fold(sets[0].clone(), |acc, s| group.sumset(&acc, s));
    let h = stabilizer(group, &sum)?;
    let lhs = sum.len() as i64;
    let rhs = sets
        .iter()
        .map(|s| group.sumset(s, &h.members).len() as i64)
        .sum::<i64>()
        - (sets.len() as i64 - 1) * h.order as i64;
    Ok(KneserReport {
        lhs,
        rhs,
        holds: lhs >= rhs,
        stabilizer: h,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum St0Outcome {
    NotApplicable(String),
    Holds,
    /// A nontrivial stabilizer; contradicts the lemma.
    Violated(Subgroup),
}

/// For a regular `S` with `|S| ≥ max{|G|/p + p − 2, D(G)}` and `Σ(S) ≠ G`,
/// checks that `st(Σ(S))` is trivial.
pub fn lemma_st0_check(seq: &Sequence) -> Result<St0Outcome> {
    let group = seq.group();
    if !seq.is_regular()? {
        return Ok(St0Outcome::NotApplicable("sequence is not regular".into()));
    }
    let p = group.smallest_prime() as usize;
    let d = match davenport(group, DavenportMode::Formula) {
        Ok(d) => d,
        Err(ZsError::FormulaUnavailable { .. }) => davenport(group, DavenportMode::BruteForce)?,
        Err(e) => return Err(e),
    };
    let threshold = (group.order() / p + p - 2).max(d);
    if seq.len() < threshold {
        return Ok(St0Outcome::NotApplicable(format!(
            "length {} below threshold {threshold}",
            seq.len()
        )));
    }
    let sigma = seq.sigma_set();
    if sigma.is_full() {
        return Ok(St0Outcome::NotApplicable(
            "sequence is an additive basis".into(),
        ));
    }
    let st = stabilizer(group, &sigma)?;
    Ok(if st.is_trivial() {
        St0Outcome::Holds
    } else {
        St0Outcome::Violated(st)
    })
}

/// Calls `visit` on every regular sequence of exactly `length` nonzero terms,
/// in canonical (non-decreasing index) order, together with its `Σ(S)`.
/// With `skip_saturated`, prefixes with `Σ₀ = G` are dropped: all their
/// extensions are bases.
pub fn for_each_regular(
    group: &AbelianGroup,
    length: usize,
    skip_saturated: bool,
    mut visit: impl FnMut(&Sequence, &ElementSet),
) -> Result<()> {
    let mut counter = RegularityCounter::new(group)?;
    let mut seq = Sequence::new(group);
    let sigma = ElementSet::empty(group.order());
    #[allow(clippy::too_many_arguments)]
    fn rec(
        group: &AbelianGroup,
        counter: &mut RegularityCounter,
        seq: &mut Sequence,
        sigma: &ElementSet,
        start: usize,
        length: usize,
        skip_saturated: bool,
        visit: &mut dyn FnMut(&Sequence, &ElementSet),
    ) {
        if seq.len() == length {
            visit(seq, sigma);
            return;
        }
        if skip_saturated && sigma.len() + usize::from(!sigma.contains(0)) == group.order() {
            return;
        }
        for g in start..group.order() {
            if !counter.try_push(g) {
                continue;
            }
            let mut next = group.translate(sigma, g);
            next.insert(g);
            next.union_with(sigma);
            seq.push(g);
            rec(group, counter, seq, &next, g, length, skip_saturated, visit);
            seq.remove(g);
            counter.pop(g);
        }
    }
    rec(
        group,
        &mut counter,
        &mut seq,
        &sigma,
        1,
        length,
        skip_saturated,
        &mut visit,
    );
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Rank2InverseReport {
    pub p: u64,
    pub checked: u64,
    pub min_sigma0: usize,
    pub violations: Vec<Sequence>,
}

impl Rank2InverseReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Over `C_p ⊕ C_p`, checks `|Σ₀(S)| ≥ p² − 1` for every regular `S` of
/// length `2p − 2`.
pub fn rank2_inverse_check(p: u64) -> Result<Rank2InverseReport> {
    if !matches!(p, 2 | 3 | 5) {
        return Err(ZsError::PreconditionFailed(format!(
            "rank-2 inverse check supports p ∈ {{2, 3, 5}}, got {p}"
        )));
    }
    let group = AbelianGroup::new(&[p, p])?;
    let need = (p * p - 1) as usize;
    let mut report = Rank2InverseReport {
        p,
        checked: 0,
        min_sigma0: usize::MAX,
        violations: vec![],
    };
    for_each_regular(&group, (2 * p - 2) as usize, false, |s, sigma| {
        report.checked += 1;
        let s0 = sigma.len() + usize::from(!sigma.contains(0));
        report.min_sigma0 = report.min_sigma0.min(s0);
        if s0 < need {
            report.violations.push(s.clone());
        }
    })?;
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct CyclicInverseReport {
    pub n: u64,
    pub non_bases: Vec<Sequence>,
    pub violations: Vec<Sequence>,
}

impl CyclicInverseReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Over `C_n`, every regular non-basis of length `n − 1` must be `g^{n−1}`
/// for a generator `g`.
pub fn cyclic_inverse_check(n: u64) -> Result<CyclicInverseReport> {
    if !(2..=30).contains(&n) {
        return Err(ZsError::PreconditionFailed(format!(
            "cyclic inverse check supports 2 ≤ n ≤ 30, got {n}"
        )));
    }
    let group = AbelianGroup::cyclic(n)?;
    let mut report = CyclicInverseReport {
        n,
        non_bases: vec![],
        violations: vec![],
    };
    for_each_regular(&group, (n - 1) as usize, true, |s, sigma| {
        if sigma.is_full() {
            return;
        }
        report.non_bases.push(s.clone());
        let single_generator = match s.distinct().collect::<Vec<_>>().as_slice() {
            [(g, _)] => group.order_of(*g) == n,
            _ => false,
        };
        if !single_generator {
            report.violations.push(s.clone());
        }
    })?;
    Ok(report)
}
