//! Finite abelian groups in invariant-factor form.
//!
//! Elements are addressed by a mixed-radix index, least-significant
//! coordinate first: `index = c₀ + n₀·c₁ + n₀n₁·c₂ + …`. The zero element
//! always has index 0.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZsError};
use crate::set::ElementSet;

/// Default bound on |G| for subgroup-lattice enumeration.
pub const SUBGROUP_ENUMERATION_LIMIT: usize = 10_000;

/// Largest group the element tables are built for.
const MAX_ORDER: usize = 1 << 22;

/// Addition tables are precomputed up to this order.
const ADD_TABLE_LIMIT: usize = 512;

/// Coordinates of a group element, one per invariant factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }
}

impl From<Vec<u64>> for GroupElement {
    fn from(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A subgroup stored as an explicit member bitset.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub members: ElementSet,
    pub order: usize,
    pub generators: Vec<usize>,
}

impl Subgroup {
    pub fn contains(&self, g: usize) -> bool {
        self.members.contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

/// All subgroups, sorted by order then by sorted member list, with a
/// reverse index from each element to the proper subgroups containing it.
#[derive(Debug)]
pub struct SubgroupLattice {
    pub subgroups: Vec<Subgroup>,
    containing: Vec<Vec<u32>>,
    proper: Vec<usize>,
}

impl SubgroupLattice {
    /// Indices (into `subgroups`) of the proper subgroups containing `g`.
    pub fn proper_containing(&self, g: usize) -> &[u32] {
        &self.containing[g]
    }

    /// Indices of all proper subgroups, in lattice order.
    pub fn proper(&self) -> &[usize] {
        &self.proper
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }
}

struct GroupData {
    factors: Vec<u64>,
    order: usize,
    exponent: u64,
    /// `coords[i * rank + k]`
    coords: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
    lattice: OnceLock<Arc<SubgroupLattice>>,
}

/// A finite abelian group `C_{n₁} ⊕ … ⊕ C_{n_r}` with `n₁ | n₂ | … | n_r`.
///
/// Cloning is cheap; the element tables and lazily computed subgroup
/// lattice are shared.
#[derive(Clone)]
pub struct AbelianGroup {
    data: Arc<GroupData>,
}

impl PartialEq for AbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || self.data.factors == other.data.factors
    }
}

impl Eq for AbelianGroup {}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianGroup({self})")
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.data.factors.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::str::FromStr for AbelianGroup {
    type Err = ZsError;

    fn from_str(s: &str) -> Result<Self> {
        let moduli = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| ZsError::InvalidGroup(format!("bad modulus {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        AbelianGroup::new(&moduli)
    }
}

fn prime_power_parts(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

/// Regroups `⊕ C_mᵢ` into invariant factors. Entries equal to 1 vanish.
pub fn invariant_factors(moduli: &[u64]) -> Vec<u64> {
    let mut by_prime: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
    for &m in moduli {
        for (p, q) in prime_power_parts(m) {
            by_prime.entry(p).or_default().push(q);
        }
    }
    let rank = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; rank];
    for powers in by_prime.values_mut() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
        for (k, q) in powers.iter().enumerate() {
            factors[rank - 1 - k] *= q;
        }
    }
    factors
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl AbelianGroup {
    /// Builds `⊕ C_mᵢ` and normalizes it to invariant-factor form.
    pub fn new(moduli: &[u64]) -> Result<Self> {
        if moduli.is_empty() {
            return Err(ZsError::InvalidGroup("empty modulus list".into()));
        }
        if moduli.contains(&0) {
            return Err(ZsError::InvalidGroup("moduli must be ≥ 1".into()));
        }
        let factors = invariant_factors(moduli);
        if factors.is_empty() {
            return Err(ZsError::InvalidGroup("trivial group".into()));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n as usize))
            .filter(|&o| o <= MAX_ORDER)
            .ok_or_else(|| ZsError::InvalidGroup(format!("order of {moduli:?} too large")))?;
        let rank = factors.len();
        let exponent = *factors.last().unwrap();

        let mut coords = vec![0u32; order * rank];
        for i in 0..order {
            let mut rest = i as u64;
            for (k, &n) in factors.iter().enumerate() {
                coords[i * rank + k] = (rest % n) as u32;
                rest /= n;
            }
        }
        let encode = |c: &mut dyn Iterator<Item = u64>| -> u32 {
            let mut idx = 0u64;
            let mut radix = 1u64;
            for (ci, &n) in c.zip(&factors) {
                idx += ci * radix;
                radix *= n;
            }
            idx as u32
        };
        let neg = (0..order)
            .map(|i| {
                let mut it = (0..rank).map(|k| {
                    let n = factors[k];
                    (n - coords[i * rank + k] as u64) % n
                });
                encode(&mut it)
            })
            .collect();
        let add_table = (order <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; order * order];
            for i in 0..order {
                for j in 0..order {
                    let mut it = (0..rank).map(|k| {
                        (coords[i * rank + k] as u64 + coords[j * rank + k] as u64) % factors[k]
                    });
                    t[i * order + j] = encode(&mut it);
                }
            }
            t
        });
        Ok(AbelianGroup {
            data: Arc::new(GroupData {
                factors,
                order,
                exponent,
                coords,
                neg,
                add_table,
                lattice: OnceLock::new(),
            }),
        })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(&[n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.data.factors
    }

    pub fn order(&self) -> usize {
        self.data.order
    }

    pub fn exponent(&self) -> u64 {
        self.data.exponent
    }

    pub fn rank(&self) -> usize {
        self.data.factors.len()
    }

    /// Smallest prime dividing |G|.
    pub fn smallest_prime(&self) -> u64 {
        prime_power_parts(self.data.factors[0])[0].0
    }

    pub fn zero(&self) -> usize {
        0
    }

    #[inline]
    pub fn coords(&self, i: usize) -> &[u32] {
        let r = self.rank();
        &self.data.coords[i * r..(i + 1) * r]
    }

    pub fn element(&self, i: usize) -> Result<GroupElement> {
        if i >= self.order() {
            return Err(ZsError::InvalidElement(format!(
                "index {i} out of range for group of order {}",
                self.order()
            )));
        }
        Ok(GroupElement::new(
            self.coords(i).iter().map(|&c| c as u64).collect(),
        ))
    }

    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        if g.coords.len() != self.rank() {
            return Err(ZsError::InvalidElement(format!(
                "{g} has {} coordinates, group {self} has rank {}",
                g.coords.len(),
                self.rank()
            )));
        }
        let mut idx = 0usize;
        let mut radix = 1usize;
        for (&c, &n) in g.coords.iter().zip(self.factors()) {
            if c >= n {
                return Err(ZsError::InvalidElement(format!(
                    "coordinate {c} of {g} not reduced modulo {n}"
                )));
            }
            idx += c as usize * radix;
            radix *= n as usize;
        }
        Ok(idx)
    }

    /// Reduces arbitrary signed coordinates modulo the invariant factors.
    pub fn index_of_reduced(&self, coords: &[i64]) -> Result<usize> {
        if coords.len() != self.rank() {
            return Err(ZsError::InvalidElement(format!(
                "{coords:?} does not match rank {}",
                self.rank()
            )));
        }
        let reduced = coords
            .iter()
            .zip(self.factors())
            .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
            .collect();
        self.index_of(&GroupElement::new(reduced))
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        let n = self.order();
        if let Some(t) = &self.data.add_table {
            return t[a * n + b] as usize;
        }
        let mut idx = 0usize;
        let mut radix = 1usize;
        for (k, &m) in self.factors().iter().enumerate() {
            let s = (self.coords(a)[k] as u64 + self.coords(b)[k] as u64) % m;
            idx += s as usize * radix;
            radix *= m as usize;
        }
        idx
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.data.neg[a] as usize
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn scalar_mul(&self, c: i64, a: usize) -> usize {
        let mut idx = 0usize;
        let mut radix = 1usize;
        for (k, &m) in self.factors().iter().enumerate() {
            let s = (c.rem_euclid(m as i64) as u64 * self.coords(a)[k] as u64) % m;
            idx += s as usize * radix;
            radix *= m as usize;
        }
        idx
    }

    /// `lcmᵢ(nᵢ / gcd(nᵢ, cᵢ))`
    pub fn order_of(&self, a: usize) -> u64 {
        self.factors()
            .iter()
            .zip(self.coords(a))
            .fold(1, |acc, (&n, &c)| lcm(acc, n / gcd(n, c as u64)))
    }

    /// `A + g`
    pub fn translate(&self, set: &ElementSet, g: usize) -> ElementSet {
        let mut out = ElementSet::empty(self.order());
        for x in set {
            out.insert(self.add(x, g));
        }
        out
    }

    /// `A + B`
    pub fn sumset(&self, a: &ElementSet, b: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.order());
        for x in a {
            for y in b {
                out.insert(self.add(x, y));
            }
        }
        out
    }

    /// Character pairing: the exponent `k` with `χ(g) = ζ_E^k`, where the
    /// dual group is identified with `G` through the invariant factors.
    pub fn pairing(&self, g: usize, chi: usize) -> u64 {
        let e = self.exponent();
        self.factors()
            .iter()
            .zip(self.coords(g).iter().zip(self.coords(chi)))
            .map(|(&n, (&a, &b))| (e / n) * ((a as u64 * b as u64) % n))
            .sum::<u64>()
            % e
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            members: ElementSet::singleton(self.order(), 0),
            order: 1,
            generators: vec![],
        }
    }

    pub fn whole(&self) -> Subgroup {
        let gens = (0..self.rank())
            .map(|k| {
                let mut radix = 1usize;
                for &n in &self.factors()[..k] {
                    radix *= n as usize;
                }
                radix
            })
            .collect();
        Subgroup {
            members: ElementSet::full(self.order()),
            order: self.order(),
            generators: gens,
        }
    }

    /// `⟨g⟩`
    pub fn cyclic_subgroup(&self, g: usize) -> Subgroup {
        let mut members = ElementSet::singleton(self.order(), 0);
        let mut x = g;
        while x != 0 {
            members.insert(x);
            x = self.add(x, g);
        }
        let order = members.len();
        Subgroup {
            members,
            order,
            generators: if g == 0 { vec![] } else { vec![g] },
        }
    }

    /// The subgroup generated by `H ∪ K`, which for abelian groups is `H + K`.
    pub fn join(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        if k.members.is_subset(&h.members) {
            return h.clone();
        }
        if h.members.is_subset(&k.members) {
            return k.clone();
        }
        let members = self.sumset(&h.members, &k.members);
        let mut generators = h.generators.clone();
        for &g in &k.generators {
            if !generators.contains(&g) {
                generators.push(g);
            }
        }
        Subgroup {
            order: members.len(),
            members,
            generators,
        }
    }

    /// The subgroup generated by an arbitrary set of elements.
    pub fn generated_by(&self, elems: &[usize]) -> Subgroup {
        elems.iter().fold(self.trivial_subgroup(), |acc, &g| {
            self.join(&acc, &self.cyclic_subgroup(g))
        })
    }

    /// `{x : m·x = 0}`
    pub fn torsion(&self, m: i64) -> Subgroup {
        let members = ElementSet::from_indices(
            self.order(),
            (0..self.order()).filter(|&x| self.scalar_mul(m, x) == 0),
        );
        let gens: Vec<usize> = members.iter().filter(|&x| x != 0).collect();
        let mut sg = self.generated_by(&gens);
        sg.members = members;
        sg.order = sg.members.len();
        sg
    }

    /// Checks that `set` contains 0 and is closed under addition and negation.
    pub fn is_subgroup(&self, set: &ElementSet) -> bool {
        if !set.contains(0) || !self.order().is_multiple_of(set.len()) {
            return false;
        }
        set.iter()
            .all(|a| set.contains(self.neg(a)) && set.iter().all(|b| set.contains(self.add(a, b))))
    }

    /// Wraps a member set as a [`Subgroup`], verifying closure.
    pub fn subgroup_from_members(&self, members: ElementSet) -> Result<Subgroup> {
        if members.universe() != self.order() || !self.is_subgroup(&members) {
            return Err(ZsError::Invariant(format!(
                "set {members:?} is not a subgroup of {self}"
            )));
        }
        let gens: Vec<usize> = members.iter().filter(|&x| x != 0).collect();
        let mut sg = self.generated_by(&gens);
        debug_assert_eq!(sg.members, members);
        sg.generators = minimize_generators(self, &sg.generators);
        Ok(sg)
    }

    /// Every subgroup of `G`, computed by join-closure from the cyclic
    /// subgroups and cached.
    pub fn all_subgroups(&self) -> Result<&[Subgroup]> {
        Ok(&self.lattice()?.subgroups)
    }

    pub fn lattice(&self) -> Result<&Arc<SubgroupLattice>> {
        self.lattice_with_limit(SUBGROUP_ENUMERATION_LIMIT)
    }

    pub fn lattice_with_limit(&self, limit: usize) -> Result<&Arc<SubgroupLattice>> {
        if let Some(l) = self.data.lattice.get() {
            return Ok(l);
        }
        if self.order() > limit {
            return Err(ZsError::EnumerationBudgetExceeded {
                order: self.order(),
                limit,
            });
        }
        let lattice = Arc::new(self.enumerate_subgroups());
        Ok(self.data.lattice.get_or_init(|| lattice))
    }

    fn enumerate_subgroups(&self) -> SubgroupLattice {
        let mut seen: HashSet<ElementSet> = HashSet::new();
        let mut all: Vec<Subgroup> = Vec::new();
        let mut cyclics: Vec<Subgroup> = Vec::new();
        for g in 0..self.order() {
            let c = self.cyclic_subgroup(g);
            if seen.insert(c.members.clone()) {
                cyclics.push(c.clone());
                all.push(c);
            }
        }
        let mut queue: VecDeque<usize> = (0..all.len()).collect();
        while let Some(i) = queue.pop_front() {
            for c in &cyclics {
                if c.members.is_subset(&all[i].members) {
                    continue;
                }
                let j = self.join(&all[i], c);
                if seen.insert(j.members.clone()) {
                    all.push(j);
                    queue.push_back(all.len() - 1);
                }
            }
        }
        let mut keyed: Vec<(usize, Vec<usize>, Subgroup)> = all
            .into_iter()
            .map(|mut s| {
                s.generators = minimize_generators(self, &s.generators);
                (s.order, s.members.iter().collect(), s)
            })
            .collect();
        keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let subgroups: Vec<Subgroup> = keyed.into_iter().map(|(_, _, s)| s).collect();

        let mut containing = vec![Vec::new(); self.order()];
        let mut proper = Vec::new();
        for (k, s) in subgroups.iter().enumerate() {
            if s.order == self.order() {
                continue;
            }
            proper.push(k);
            for x in &s.members {
                containing[x].push(k as u32);
            }
        }
        SubgroupLattice {
            subgroups,
            containing,
            proper,
        }
    }
}

/// Drops generators already contained in the span of the earlier ones.
fn minimize_generators(g: &AbelianGroup, gens: &[usize]) -> Vec<usize> {
    let mut span = g.trivial_subgroup();
    let mut out = Vec::new();
    for &x in gens {
        if !span.contains(x) {
            span = g.join(&span, &g.cyclic_subgroup(x));
            out.push(x);
        }
    }
    out
}
