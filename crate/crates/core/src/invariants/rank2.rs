//! Checks specific to `G = C₃ ⊕ C_{3q}` with `q ≥ 5` prime, where
//! `c₀(G) = 3q + 3`.

use rayon::prelude::*;

use crate::algebra::exists_vanishing_assignment;
use crate::error::{Result, ZsError};
use crate::group::{AbelianGroup, GroupElement, Subgroup};
use crate::invariants::checks::stabilizer;
use crate::sequence::{random_regular, Sequence};
use crate::set::ElementSet;

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// `C₃ ⊕ C_{3q}` for prime `q ≥ 5`.
pub fn target_group(q: u64) -> Result<AbelianGroup> {
    if q < 5 || !is_prime(q) {
        return Err(ZsError::PreconditionFailed(format!(
            "q must be a prime ≥ 5, got {q}"
        )));
    }
    AbelianGroup::new(&[3, 3 * q])
}

/// Reads `q` back from a group of shape `C₃ ⊕ C_{3q}`.
pub fn shape_q(group: &AbelianGroup) -> Result<u64> {
    match group.factors() {
        [3, m] if m % 3 == 0 && m / 3 >= 5 && is_prime(m / 3) => Ok(m / 3),
        f => Err(ZsError::PreconditionFailed(format!(
            "group {f:?} is not C3+C3q with q ≥ 5 prime"
        ))),
    }
}

/// `(0,1)^{3q−2} · (1,−1)^4`, a regular sequence of length `3q + 2` that is
/// not a basis.
pub fn extremal_sequence(q: u64) -> Result<Sequence> {
    let g = target_group(q)?;
    let mut s = Sequence::power(&g, g.index_of_reduced(&[0, 1])?, (3 * q - 2) as u32);
    s.push_n(g.index_of_reduced(&[1, -1])?, 4);
    Ok(s)
}

#[derive(Clone, Debug)]
pub struct ExtremalReport {
    pub q: u64,
    pub sequence: Sequence,
    pub length: usize,
    pub regular: bool,
    /// `(2, 3q − 3)`
    pub target: GroupElement,
    pub target_missing: bool,
    pub missing: Vec<GroupElement>,
    pub lower_bound: u64,
}

impl ExtremalReport {
    pub fn holds(&self) -> bool {
        self.length as u64 == 3 * self.q + 2 && self.regular && self.target_missing
    }
}

pub fn verify_extremal(q: u64) -> Result<ExtremalReport> {
    let s = extremal_sequence(q)?;
    let g = s.group().clone();
    let target_idx = g.index_of_reduced(&[2, 3 * q as i64 - 3])?;
    let missing = s.missing_elements();
    Ok(ExtremalReport {
        q,
        length: s.len(),
        regular: s.is_regular()?,
        target: g.element(target_idx)?,
        target_missing: missing.contains(target_idx),
        missing: missing
            .iter()
            .map(|i| g.element(i))
            .collect::<Result<_>>()?,
        lower_bound: 3 * q + 3,
        sequence: s,
    })
}

/// Sufficient conditions for a regular `S` of length `3q + 3` over
/// `C₃ ⊕ C_{3q}` to be an additive basis.
#[derive(Clone, Debug)]
pub enum BasicLemmaCertificate {
    /// A nontrivial subgroup `H′` with `Σ₀(S_{H′}) = H′`.
    SubgroupCover { subgroup: Subgroup },
    /// `S′ | S`, nontrivial `H′`, and `a` with `Σ₀(S′) ⊇ a + H′` and
    /// `(ℓ − |I_{S_M} ∪ I_{S′}| + 1)·|M| ≥ 9q`, where
    /// `M = st((a + H′) + Σ₀(S·S′⁻¹))`.
    CosetGrowth {
        sub: Sequence,
        subgroup: Subgroup,
        shift: usize,
    },
    /// `S_H · S_K` admits a vanishing assignment, where `H ≅ C₃ ⊕ C₃` and
    /// `K ≅ C_q`.
    Vanishing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectReason {
    NontrivialityRequired,
    NotASubgroup,
    SubgroupNotCovered,
    NotASubsequence,
    CosetNotCovered,
    InequalityFails { lhs: u64, rhs: u64 },
    NoVanishingAssignment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateVerdict {
    Accepted,
    Rejected(RejectReason),
    /// The certificate checks out but `S` is not a basis.
    ContradictsLemma,
}

/// `|I_{S_M} ∪ I_{S′}|`: all terms of `S` inside `M`, plus the terms of `S′`
/// outside `M`.
fn union_index_count(seq: &Sequence, sub: &Sequence, m: &ElementSet) -> usize {
    seq.distinct()
        .map(|(g, k)| {
            if m.contains(g) {
                k
            } else {
                sub.multiplicity(g)
            }
        })
        .map(|k| k as usize)
        .sum()
}

/// Verifies a certificate for `S`. Preconditions (group shape, length
/// `3q + 3`, regularity) are errors; a failing certificate is a rejection.
pub fn lemma_basic_check(
    seq: &Sequence,
    cert: &BasicLemmaCertificate,
) -> Result<CertificateVerdict> {
    let group = seq.group();
    let q = shape_q(group)?;
    let ell = 3 * q as usize + 3;
    if seq.len() != ell {
        return Err(ZsError::PreconditionFailed(format!(
            "length {} ≠ 3q + 3 = {ell}",
            seq.len()
        )));
    }
    if !seq.is_regular()? {
        return Err(ZsError::PreconditionFailed(
            "sequence is not regular".into(),
        ));
    }
    let check_subgroup = |h: &Subgroup| -> Option<RejectReason> {
        if h.members.universe() != group.order() || !group.is_subgroup(&h.members) {
            Some(RejectReason::NotASubgroup)
        } else if h.members.len() <= 1 {
            Some(RejectReason::NontrivialityRequired)
        } else {
            None
        }
    };

    let verdict = match cert {
        BasicLemmaCertificate::SubgroupCover { subgroup } => {
            if let Some(r) = check_subgroup(subgroup) {
                CertificateVerdict::Rejected(r)
            } else if seq.restrict(subgroup).sigma0_set() != subgroup.members {
                CertificateVerdict::Rejected(RejectReason::SubgroupNotCovered)
            } else {
                CertificateVerdict::Accepted
            }
        }
        BasicLemmaCertificate::CosetGrowth {
            sub,
            subgroup,
            shift,
        } => 'v: {
            if let Some(r) = check_subgroup(subgroup) {
                break 'v CertificateVerdict::Rejected(r);
            }
            if !sub.divides(seq) {
                break 'v CertificateVerdict::Rejected(RejectReason::NotASubsequence);
            }
            if *shift >= group.order() {
                return Err(ZsError::InvalidElement(format!(
                    "index {shift} out of range"
                )));
            }
            let coset = group.translate(&subgroup.members, *shift);
            if !coset.is_subset(&sub.sigma0_set()) {
                break 'v CertificateVerdict::Rejected(RejectReason::CosetNotCovered);
            }
            let rest = seq.without(sub)?;
            let a = group.sumset(&coset, &rest.sigma0_set());
            let m = stabilizer(group, &a)?;
            let lhs = (ell - union_index_count(seq, sub, &m.members) + 1) as u64 * m.order as u64;
            let rhs = 9 * q;
            if lhs >= rhs {
                CertificateVerdict::Accepted
            } else {
                CertificateVerdict::Rejected(RejectReason::InequalityFails { lhs, rhs })
            }
        }
        BasicLemmaCertificate::Vanishing => {
            let h = group.torsion(3);
            let k = group.torsion(q as i64);
            let part = seq.restrict(&h).concat(&seq.restrict(&k));
            if !part.is_empty() && exists_vanishing_assignment(&part)?.is_some() {
                CertificateVerdict::Accepted
            } else {
                CertificateVerdict::Rejected(RejectReason::NoVanishingAssignment)
            }
        }
    };
    if verdict == CertificateVerdict::Accepted && !seq.is_basis() {
        return Ok(CertificateVerdict::ContradictsLemma);
    }
    Ok(verdict)
}

#[derive(Clone, Debug, Default)]
pub struct MonteCarloOptions {
    /// Sample length; defaults to `3q + 3`.
    pub length: Option<usize>,
    /// Extra sequences checked alongside the samples.
    pub planted: Vec<Sequence>,
}

#[derive(Clone, Debug)]
pub struct MonteCarloReport {
    pub q: u64,
    pub length: usize,
    pub seed: u64,
    pub trials_run: u64,
    pub counterexamples: Vec<Sequence>,
    pub planted_counterexamples: Vec<Sequence>,
}

/// Samples regular sequences of length `3q + 3` (trial `i` uses seed
/// `seed + i`) and collects every one that is not a basis.
pub fn monte_carlo_theorem(
    q: u64,
    trials: u64,
    seed: u64,
    opts: &MonteCarloOptions,
) -> Result<MonteCarloReport> {
    let group = target_group(q)?;
    let length = opts.length.unwrap_or(3 * q as usize + 3);
    group.lattice()?;
    let results: Vec<Result<Option<Sequence>>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = random_regular(&group, length, seed.wrapping_add(i))?;
            Ok((!s.is_basis()).then_some(s))
        })
        .collect();
    let mut counterexamples = Vec::new();
    for r in results {
        if let Some(s) = r? {
            counterexamples.push(s);
        }
    }
    let mut planted_counterexamples = Vec::new();
    for s in &opts.planted {
        if s.group() != &group {
            return Err(ZsError::InvalidSequence(format!(
                "planted sequence is over {}, expected {group}",
                s.group()
            )));
        }
        if s.is_regular()? && !s.is_basis() {
            planted_counterexamples.push(s.clone());
        }
    }
    Ok(MonteCarloReport {
        q,
        length,
        seed,
        trials_run: trials,
        counterexamples,
        planted_counterexamples,
    })
}

/// A value stated for a family of groups.
#[derive(Clone, Debug)]
pub struct KnownInvariant {
    pub family: &'static str,
    pub invariant: &'static str,
    pub value: u64,
    pub source: &'static str,
}

/// Values this crate treats as fixtures for the given group, if any.
pub fn known_invariants(group: &AbelianGroup) -> Vec<KnownInvariant> {
    let mut out = Vec::new();
    match *group.factors() {
        [n] => out.push(KnownInvariant {
            family: "C_n",
            invariant: "D",
            value: n,
            source: "Davenport constant of a cyclic group",
        }),
        [n1, n2] => {
            out.push(KnownInvariant {
                family: "C_n1+C_n2",
                invariant: "D",
                value: n1 + n2 - 1,
                source: "rank-2 Davenport formula",
            });
            if n1 == n2 && is_prime(n1) {
                out.push(KnownInvariant {
                    family: "C_p+C_p",
                    invariant: "c0",
                    value: 2 * n1 - 1,
                    source: "c0 of elementary rank-2 groups",
                });
            }
            if (n1 == 2 || n1 == 3) && n2 % n1 == 0 {
                out.push(KnownInvariant {
                    family: if n1 == 2 { "C_2+C_2n" } else { "C_3+C_3n" },
                    invariant: "d(G,F)",
                    value: n1 + n2 - 2,
                    source: "group-algebra constant equals d(G)",
                });
            }
            if let Ok(q) = shape_q(group) {
                out.push(KnownInvariant {
                    family: "C_3+C_3q",
                    invariant: "c0",
                    value: 3 * q + 3,
                    source: "c0 of C3+C3q for prime q ≥ 5",
                });
            }
        }
        _ => {}
    }
    out
}
