//! The group algebra `F_ℓ[G]` over a prime splitting field.
//!
//! With `ℓ ≡ 1 (mod E)` the field holds a primitive `E`-th root of unity `w`,
//! and the characters of `G` are `χ(g) = w^{pairing(g, χ)}`. An element `α`
//! is zero iff every character value `χ(α)` is zero.
//!
//! For `Π (X^{gᵢ} − aᵢ)` the value at `χ` is `Π (χ(gᵢ) − aᵢ)`, so the product
//! vanishes iff each character is killed by some factor, i.e. `aᵢ = χ(gᵢ)`
//! for some `i`. A unit `aᵢ` that is not an `E`-th root of unity kills
//! nothing, which is why an assignment only needs `aᵢ ∈ {w^k} ∪ {Free}`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZsError};
use crate::group::{AbelianGroup, Subgroup};
use crate::search::{SearchBudget, SearchReport, TaskOutcome, TaskRunner};
use crate::sequence::Sequence;
use crate::set::ElementSet;

const PRIME_SEARCH_LIMIT: u64 = 1_000_000;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A prime field `F_ℓ` with a fixed primitive `E`-th root of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingField {
    prime: u64,
    root: u64,
    exponent: u64,
    powers: Vec<u64>,
}

impl SplittingField {
    /// Smallest prime `ℓ ≡ 1 (mod E)` with its smallest primitive `E`-th root.
    pub fn for_group(group: &AbelianGroup) -> Result<Self> {
        Self::search(group.exponent(), 1)
    }

    /// Smallest prime `ℓ ≡ 1 (mod E)` with `ℓ − 1 > E`, so that some unit is
    /// not an `E`-th root of unity and [`Slot::Free`] can be realized.
    pub fn with_free_units(group: &AbelianGroup) -> Result<Self> {
        Self::search(group.exponent(), 2)
    }

    pub fn with_prime(group: &AbelianGroup, prime: u64) -> Result<Self> {
        let e = group.exponent();
        if !is_prime(prime) || prime % e != 1 {
            return Err(ZsError::FieldSearch(format!(
                "{prime} is not a prime congruent to 1 mod {e}"
            )));
        }
        Self::build(e, prime)
    }

    fn search(e: u64, min_k: u64) -> Result<Self> {
        let mut k = min_k;
        while k * e < PRIME_SEARCH_LIMIT {
            if is_prime(k * e + 1) {
                return Self::build(e, k * e + 1);
            }
            k += 1;
        }
        Err(ZsError::FieldSearch(format!(
            "no prime ≡ 1 mod {e} below {PRIME_SEARCH_LIMIT}"
        )))
    }

    fn build(e: u64, prime: u64) -> Result<Self> {
        let divisors = prime_divisors(e);
        let root = (2..prime)
            .find(|&w| {
                pow_mod(w, e, prime) == 1 && divisors.iter().all(|&r| pow_mod(w, e / r, prime) != 1)
            })
            .or_else(|| (e == 1).then_some(1))
            .ok_or_else(|| ZsError::FieldSearch(format!("no root of order {e} mod {prime}")))?;
        let mut powers = Vec::with_capacity(e as usize);
        let mut x = 1;
        for _ in 0..e {
            powers.push(x);
            x = x * root % prime;
        }
        Ok(SplittingField {
            prime,
            root,
            exponent: e,
            powers,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `w^k`
    #[inline]
    pub fn root_power(&self, k: u64) -> u64 {
        self.powers[(k % self.exponent) as usize]
    }

    /// Smallest unit that is not an `E`-th root of unity, if the field has one.
    pub fn free_value(&self) -> Option<u64> {
        (2..self.prime).find(|&a| pow_mod(a, self.exponent, self.prime) != 1)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.prime
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.prime - b % self.prime) % self.prime
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.prime
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// An element `Σ c_g X^g` of the group algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub coeffs: Vec<u64>,
}

impl AlgebraElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// `F_ℓ[G]` for a fixed group and splitting field.
#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    group: AbelianGroup,
    field: SplittingField,
}

impl GroupAlgebra {
    pub fn new(group: &AbelianGroup, field: SplittingField) -> Result<Self> {
        if field.exponent() != group.exponent() {
            return Err(ZsError::FieldSearch(format!(
                "field built for exponent {}, group {group} has exponent {}",
                field.exponent(),
                group.exponent()
            )));
        }
        Ok(GroupAlgebra {
            group: group.clone(),
            field,
        })
    }

    /// Uses [`SplittingField::for_group`].
    pub fn for_group(group: &AbelianGroup) -> Result<Self> {
        Self::new(group, SplittingField::for_group(group)?)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn field(&self) -> &SplittingField {
        &self.field
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            coeffs: vec![0; self.group.order()],
        }
    }

    /// `X^g`
    pub fn monomial(&self, g: usize) -> AlgebraElement {
        let mut a = self.zero();
        a.coeffs[g] = 1;
        a
    }

    pub fn one(&self) -> AlgebraElement {
        self.monomial(0)
    }

    /// `X^g − a`
    pub fn binomial(&self, g: usize, a: u64) -> AlgebraElement {
        let mut x = self.monomial(g);
        x.coeffs[0] = self.field.sub(x.coeffs[0], a);
        x
    }

    /// `Σ_{h ∈ set} X^h`
    pub fn set_sum(&self, set: &ElementSet) -> AlgebraElement {
        let mut x = self.zero();
        for h in set {
            x.coeffs[h] = 1;
        }
        x
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.field.add(x, y))
                .collect(),
        }
    }

    /// Convolution product, computed directly in the group basis.
    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut out = self.zero();
        let p = self.field.prime();
        for (u, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (v, &y) in b.coeffs.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let g = self.group.add(u, v);
                out.coeffs[g] = (out.coeffs[g] + x * y) % p;
            }
        }
        out
    }

    /// `Π (X^{gᵢ} − aᵢ)` over `(gᵢ, aᵢ)` pairs.
    pub fn product_of_binomials(&self, factors: &[(usize, u64)]) -> AlgebraElement {
        factors.iter().fold(self.one(), |acc, &(g, a)| {
            self.multiply(&acc, &self.binomial(g, a))
        })
    }

    /// Character values `χ(α)` for every `χ`, indexed like group elements.
    pub fn spectrum(&self, a: &AlgebraElement) -> Vec<u64> {
        let n = self.group.order();
        (0..n)
            .map(|chi| {
                a.coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .fold(0, |acc, (g, &c)| {
                        let w = self.field.root_power(self.group.pairing(g, chi));
                        self.field.add(acc, self.field.mul(c, w))
                    })
            })
            .collect()
    }

    /// `L_α = {g : α(X^g − a) = 0 for some unit a}`: the elements whose
    /// pairing is constant on the spectral support of `α`.
    pub fn l_alpha(&self, a: &AlgebraElement) -> Result<Subgroup> {
        let spec = self.spectrum(a);
        let support: Vec<usize> = (0..spec.len()).filter(|&chi| spec[chi] != 0).collect();
        let Some((&first, rest)) = support.split_first() else {
            return Err(ZsError::ZeroElement);
        };
        let members = ElementSet::from_indices(
            self.group.order(),
            (0..self.group.order()).filter(|&g| {
                let k = self.group.pairing(g, first);
                rest.iter().all(|&chi| self.group.pairing(g, chi) == k)
            }),
        );
        self.group.subgroup_from_members(members)
    }

    /// Materializes an assignment into field values, one per term of
    /// `seq.terms()`. Free slots need a field with non-root units.
    pub fn assignment_values(
        &self,
        seq: &Sequence,
        assignment: &VanishingAssignment,
    ) -> Result<Vec<(usize, u64)>> {
        let terms = seq.terms();
        if terms.len() != assignment.slots.len() {
            return Err(ZsError::InvalidSequence(format!(
                "assignment has {} slots for {} terms",
                assignment.slots.len(),
                terms.len()
            )));
        }
        terms
            .iter()
            .zip(&assignment.slots)
            .map(|(&g, slot)| match slot {
                Slot::Kill(k) => Ok((g, self.field.root_power(*k))),
                Slot::Free => self.field.free_value().map(|a| (g, a)).ok_or_else(|| {
                    ZsError::FieldSearch(format!(
                        "F_{} has no unit outside the {}-th roots of unity",
                        self.field.prime(),
                        self.field.exponent()
                    ))
                }),
            })
            .collect()
    }
}

/// One choice of `aᵢ`: the root of unity `w^k`, or a unit that kills no
/// character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    Kill(u64),
    Free,
}

/// Per-term choices, aligned with [`Sequence::terms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingAssignment {
    pub slots: Vec<Slot>,
}

impl VanishingAssignment {
    /// JSON list `[{pos, kill_exponent}|{pos, free: true}]`.
    pub fn to_json(&self) -> serde_json::Value {
        self.slots
            .iter()
            .enumerate()
            .map(|(pos, s)| match s {
                Slot::Kill(k) => serde_json::json!({"pos": pos, "kill_exponent": k}),
                Slot::Free => serde_json::json!({"pos": pos, "free": true}),
            })
            .collect()
    }
}

struct CoverSolver<'a> {
    n: usize,
    /// distinct elements of the sequence
    elems: Vec<usize>,
    remaining: Vec<u32>,
    /// `classes[e][k]`: characters with pairing(elems[e], χ) = k
    classes: Vec<Vec<ElementSet>>,
    pairings: Vec<Vec<u64>>,
    class_size: Vec<usize>,
    /// branch order over distinct elements
    order: Vec<usize>,
    chosen: Vec<(usize, u64)>,
    nodes: &'a mut u64,
}

impl CoverSolver<'_> {
    fn solve(&mut self, covered: &mut ElementSet) -> bool {
        *self.nodes += 1;
        // Every unused term can kill any character, so all uncovered
        // characters tie on candidate count; take the smallest index.
        let Some(chi) = covered.first_absent() else {
            return true;
        };
        let uncovered = self.n - covered.len();
        let capacity: usize = (0..self.elems.len())
            .map(|e| self.remaining[e] as usize * self.class_size[e])
            .sum();
        if capacity < uncovered {
            return false;
        }
        for idx in 0..self.order.len() {
            let e = self.order[idx];
            if self.remaining[e] == 0 {
                continue;
            }
            let k = self.pairings[e][chi];
            let mut next = covered.clone();
            next.union_with(&self.classes[e][k as usize]);
            self.remaining[e] -= 1;
            self.chosen.push((e, k));
            if self.solve(&mut next) {
                return true;
            }
            self.chosen.pop();
            self.remaining[e] += 1;
        }
        false
    }
}

/// Searches for units `aᵢ` with `Π (X^{gᵢ} − aᵢ) = 0` as a cover of the
/// character group: pick the first uncovered character, branch on which
/// distinct term kills it. Terms with equal elements are interchangeable,
/// so each distinct element is tried once per branch point.
pub fn exists_vanishing_assignment(seq: &Sequence) -> Result<Option<VanishingAssignment>> {
    let mut nodes = 0;
    exists_vanishing_assignment_counted(seq, &mut nodes)
}

fn exists_vanishing_assignment_counted(
    seq: &Sequence,
    nodes: &mut u64,
) -> Result<Option<VanishingAssignment>> {
    if seq.is_empty() {
        return Err(ZsError::PreconditionFailed(
            "vanishing assignment needs a nonempty sequence".into(),
        ));
    }
    let g = seq.group();
    let n = g.order();
    let e_exp = g.exponent();
    let distinct: Vec<(usize, u32)> = seq.distinct().collect();
    let elems: Vec<usize> = distinct.iter().map(|&(x, _)| x).collect();
    let pairings: Vec<Vec<u64>> = elems
        .iter()
        .map(|&x| (0..n).map(|chi| g.pairing(x, chi)).collect())
        .collect();
    let classes: Vec<Vec<ElementSet>> = pairings
        .iter()
        .map(|p| {
            let mut cls = vec![ElementSet::empty(n); e_exp as usize];
            for (chi, &k) in p.iter().enumerate() {
                cls[k as usize].insert(chi);
            }
            cls
        })
        .collect();
    let class_size: Vec<usize> = elems.iter().map(|&x| n / g.order_of(x) as usize).collect();
    let mut order: Vec<usize> = (0..elems.len()).collect();
    order.sort_by_key(|&e| (std::cmp::Reverse(class_size[e]), elems[e]));

    let mut solver = CoverSolver {
        n,
        remaining: distinct.iter().map(|&(_, m)| m).collect(),
        elems,
        classes,
        pairings,
        class_size,
        order,
        chosen: Vec::new(),
        nodes,
    };
    let mut covered = ElementSet::empty(n);
    if !solver.solve(&mut covered) {
        return Ok(None);
    }

    // Hand the chosen kills out to term positions.
    let mut kills_by_elem: Vec<Vec<u64>> = vec![Vec::new(); solver.elems.len()];
    for &(e, k) in &solver.chosen {
        kills_by_elem[e].push(k);
    }
    let mut slots = Vec::with_capacity(seq.len());
    for (e, &(_, m)) in distinct.iter().enumerate() {
        for j in 0..m as usize {
            slots.push(match kills_by_elem[e].get(j) {
                Some(&k) => Slot::Kill(k),
                None => Slot::Free,
            });
        }
    }
    let assignment = VanishingAssignment { slots };
    verify_vanishing(seq, &assignment)?;
    Ok(Some(assignment))
}

/// Multiplies out the killing factors in the group basis and checks the
/// product is zero. Free factors are omitted: they cannot undo a zero.
pub fn verify_vanishing(seq: &Sequence, assignment: &VanishingAssignment) -> Result<()> {
    let alg = GroupAlgebra::for_group(seq.group())?;
    let factors: Vec<(usize, u64)> = seq
        .terms()
        .into_iter()
        .zip(&assignment.slots)
        .filter_map(|(g, s)| match s {
            Slot::Kill(k) => Some((g, alg.field().root_power(*k))),
            Slot::Free => None,
        })
        .collect();
    if factors.is_empty() || !alg.product_of_binomials(&factors).is_zero() {
        return Err(ZsError::Invariant(format!(
            "assignment {assignment:?} does not annihilate {seq:?}"
        )));
    }
    Ok(())
}

/// A coset `g₀ + H` with `(g₀ + H) ∖ {0} ⊆ Σ(S)`.
#[derive(Clone, Debug)]
pub struct CoveredCoset {
    pub representative: usize,
    pub subgroup: Subgroup,
}

/// For `α = Π (X^{gᵢ} − aᵢ) ≠ 0` finds a coset of `H = L_α` whose nonzero
/// elements all lie in `Σ(S)`, and checks that `Σ(S·h) ⊇ g₀ + H` for every
/// `h ∈ H`. `values[i]` is the unit paired with the i-th entry of
/// `seq.terms()`.
pub fn find_covered_coset(
    alg: &GroupAlgebra,
    seq: &Sequence,
    values: &[u64],
) -> Result<CoveredCoset> {
    let terms = seq.terms();
    if terms.len() != values.len() {
        return Err(ZsError::InvalidSequence(format!(
            "{} values for {} terms",
            values.len(),
            terms.len()
        )));
    }
    if values.iter().any(|&a| a % alg.field().prime() == 0) {
        return Err(ZsError::PreconditionFailed("aᵢ must be units".into()));
    }
    let factors: Vec<(usize, u64)> = terms.iter().copied().zip(values.iter().copied()).collect();
    let alpha = alg.product_of_binomials(&factors);
    if alpha.is_zero() {
        return Err(ZsError::VanishingProduct);
    }
    let h = alg.l_alpha(&alpha)?;
    let g = seq.group();
    let sigma = seq.sigma_set();
    let sigma0 = seq.sigma0_set();
    let mut seen = ElementSet::empty(g.order());
    for g0 in 0..g.order() {
        if seen.contains(g0) {
            continue;
        }
        let coset = g.translate(&h.members, g0);
        seen.union_with(&coset);
        let mut nonzero = coset.clone();
        nonzero.remove(0);
        if !nonzero.is_subset(&sigma) {
            continue;
        }
        // Σ(S·h) = Σ(S) ∪ (h + Σ₀(S))
        for x in &h.members {
            let mut extended = g.translate(&sigma0, x);
            extended.union_with(&sigma);
            if !coset.is_subset(&extended) {
                return Err(ZsError::CosetNotFound(format!(
                    "Σ(S·h) misses part of {g0} + L_α for h = {x}, S = {seq:?}"
                )));
            }
        }
        return Ok(CoveredCoset {
            representative: g0,
            subgroup: h,
        });
    }
    Err(ZsError::CosetNotFound(format!(
        "no coset of L_α (order {}) is covered by Σ(S) for S = {seq:?}, a = {values:?}",
        h.order
    )))
}

/// Looks for a sequence of the given length over the nonzero elements with
/// no vanishing assignment, enumerating non-decreasing index multisets. A
/// prefix that already vanishes is pruned, since the remaining terms can be
/// left Free.
pub fn nonvanishing_witness_search(
    group: &AbelianGroup,
    length: usize,
    budget: &SearchBudget,
) -> Result<Option<Sequence>> {
    let n = group.order();
    if length == 0 {
        return Ok(Some(Sequence::new(group)));
    }
    let runner = TaskRunner::new(budget.clone(), None);
    let tasks: Vec<Vec<usize>> = (1..n).map(|g| vec![g]).collect();
    let outcome = runner.run(&tasks, |prefix, ctl| {
        let mut seq = Sequence::from_indices(group, prefix.iter().copied());
        let mut nodes = 0u64;
        let found = witness_dfs(&mut seq, prefix[0], length, ctl, &mut nodes)?;
        Some(TaskOutcome {
            best_len: found.as_ref().map(Sequence::len),
            witness: found,
            nodes,
            cap_hit: false,
        })
    });
    let (records, exhausted) = outcome?;
    let nodes = records.iter().map(|r| r.nodes).sum();
    if exhausted {
        return Err(ZsError::SearchBudgetExceeded(Box::new(
            SearchReport::partial(group, "nonvanishing_witness", nodes, runner.elapsed()),
        )));
    }
    Ok(records.into_iter().find_map(|r| r.witness))
}

fn witness_dfs(
    seq: &mut Sequence,
    last: usize,
    length: usize,
    ctl: &crate::search::Control,
    nodes: &mut u64,
) -> Option<Option<Sequence>> {
    if !ctl.tick() {
        return None;
    }
    *nodes += 1;
    let vanishes = exists_vanishing_assignment(seq)
        .expect("nonempty prefix")
        .is_some();
    if vanishes {
        return Some(None);
    }
    if seq.len() == length {
        return Some(Some(seq.clone()));
    }
    for g in last..seq.group().order() {
        seq.push(g);
        let r = witness_dfs(seq, g, length, ctl, nodes);
        seq.remove(g);
        match r {
            None => return None,
            Some(Some(w)) => return Some(Some(w)),
            Some(None) => {}
        }
    }
    Some(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(m: &[u64]) -> AbelianGroup {
        AbelianGroup::new(m).unwrap()
    }

    #[test]
    fn field_choice() {
        let f = SplittingField::for_group(&g(&[3, 15])).unwrap();
        assert_eq!(f.prime(), 31);
        assert_eq!(pow_mod(f.root(), 15, 31), 1);
        assert_ne!(pow_mod(f.root(), 5, 31), 1);
        assert_ne!(pow_mod(f.root(), 3, 31), 1);
        assert_eq!(SplittingField::for_group(&g(&[3])).unwrap().prime(), 7);
        assert_eq!(SplittingField::for_group(&g(&[2])).unwrap().prime(), 3);
        assert!(SplittingField::for_group(&g(&[2]))
            .unwrap()
            .free_value()
            .is_none());
        let f6 = SplittingField::with_free_units(&g(&[6])).unwrap();
        assert_eq!(f6.prime(), 13);
        assert!(f6.free_value().is_some());
        assert!(SplittingField::with_prime(&g(&[6]), 11).is_err());
    }

    #[test]
    fn multiply_basics() {
        let gr = g(&[3, 15]);
        let alg = GroupAlgebra::for_group(&gr).unwrap();
        let a = gr.index_of_reduced(&[1, 2]).unwrap();
        let b = gr.index_of_reduced(&[2, 7]).unwrap();
        assert_eq!(
            alg.multiply(&alg.monomial(a), &alg.monomial(b)),
            alg.monomial(gr.add(a, b))
        );
        let x = alg.monomial(a);
        assert_eq!(alg.multiply(&alg.one(), &x), x);
        assert_eq!(alg.multiply(&x, &alg.one()), x);
        let cyc = gr.cyclic_subgroup(a);
        let p = alg.multiply(&alg.binomial(a, 1), &alg.set_sum(&cyc.members));
        assert!(p.is_zero());
    }

    #[test]
    fn spectrum_basics() {
        let gr = g(&[3, 15]);
        let alg = GroupAlgebra::for_group(&gr).unwrap();
        assert!(alg.spectrum(&alg.one()).iter().all(|&v| v == 1));
        let n = gr.torsion(3);
        let spec = alg.spectrum(&alg.set_sum(&n.members));
        for (chi, &v) in spec.iter().enumerate() {
            let trivial_on_n = n.members.iter().all(|h| gr.pairing(h, chi) == 0);
            assert_eq!(v, if trivial_on_n { 9 } else { 0 });
        }
    }

    #[test]
    fn l_alpha_cases() {
        let gr = g(&[3, 15]);
        let alg = GroupAlgebra::for_group(&gr).unwrap();
        assert!(alg.l_alpha(&alg.one()).unwrap().is_trivial());
        let n = gr.torsion(5);
        assert_eq!(alg.l_alpha(&alg.set_sum(&n.members)).unwrap(), n);
        assert!(matches!(
            alg.l_alpha(&alg.zero()),
            Err(ZsError::ZeroElement)
        ));
        // the idempotent-like sum over all of G has singleton support
        let all = alg.set_sum(&ElementSet::full(gr.order()));
        assert_eq!(alg.l_alpha(&all).unwrap().order, 45);
    }

    #[test]
    fn zero_term_vanishes() {
        let gr = g(&[3, 3]);
        let s = Sequence::from_indices(&gr, [0, 4]);
        let a = exists_vanishing_assignment(&s).unwrap().unwrap();
        assert_eq!(a.slots[0], Slot::Kill(0));
    }

    #[test]
    fn long_sequences_vanish_in_c3c3() {
        let gr = g(&[3, 3]);
        let s = Sequence::from_indices(&gr, [1, 1, 3, 3, 4]);
        assert!(exists_vanishing_assignment(&s).unwrap().is_some());
        assert!(exists_vanishing_assignment(&Sequence::new(&gr)).is_err());
    }

    #[test]
    fn free_assignment_materializes() {
        let gr = g(&[3, 15]);
        let alg = GroupAlgebra::for_group(&gr).unwrap();
        let s = Sequence::from_indices(&gr, [1, 2, 3]);
        let a = VanishingAssignment {
            slots: vec![Slot::Free; 3],
        };
        let vals = alg.assignment_values(&s, &a).unwrap();
        assert!(!alg.product_of_binomials(&vals).is_zero());
    }

    #[test]
    fn witness_search_small() {
        let gr = g(&[3, 3]);
        let w = nonvanishing_witness_search(&gr, 4, &SearchBudget::unlimited())
            .unwrap()
            .unwrap();
        assert_eq!(w.len(), 4);
        assert!(exists_vanishing_assignment(&w).unwrap().is_none());
        assert!(
            nonvanishing_witness_search(&gr, 5, &SearchBudget::unlimited())
                .unwrap()
                .is_none()
        );
    }
}
