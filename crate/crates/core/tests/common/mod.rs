//! Brute-force oracles shared by the integration tests. They work from
//! coordinates and subset enumeration and avoid the library's incremental
//! machinery.

#![allow(dead_code)]

use std::collections::BTreeSet;

use zslab_core::algebra::{GroupAlgebra, SplittingField};
use zslab_core::{AbelianGroup, Sequence};

/// Moduli lists covering every rank ≤ 3 shape up to order 48 that the
/// property tests draw from.
pub const SMALL_GROUPS: &[&[u64]] = &[
    &[2],
    &[3],
    &[4],
    &[5],
    &[6],
    &[7],
    &[8],
    &[9],
    &[12],
    &[2, 2],
    &[2, 4],
    &[3, 3],
    &[2, 6],
    &[4, 4],
    &[2, 8],
    &[3, 6],
    &[2, 2, 2],
    &[2, 2, 4],
    &[3, 9],
    &[5, 5],
    &[6, 6],
    &[3, 15],
    &[4, 12],
    &[2, 2, 6],
];

pub fn group(m: &[u64]) -> AbelianGroup {
    AbelianGroup::new(m).unwrap()
}

/// Componentwise addition on coordinates.
pub fn coord_add(g: &AbelianGroup, a: usize, b: usize) -> usize {
    let (x, y) = (g.coords(a), g.coords(b));
    let c: Vec<i64> = x
        .iter()
        .zip(y)
        .map(|(&u, &v)| u as i64 + v as i64)
        .collect();
    g.index_of_reduced(&c).unwrap()
}

/// Σ(S) by running over every nonempty sub-multiset, i.e. every choice of
/// `0 ≤ kᵢ ≤ mᵢ` copies of each distinct term.
pub fn sigma_oracle(s: &Sequence) -> BTreeSet<usize> {
    let g = s.group();
    let distinct: Vec<(usize, u32)> = s.distinct().collect();
    let mut out = BTreeSet::new();
    let mut k = vec![0u32; distinct.len()];
    loop {
        let mut i = 0;
        while i < k.len() && k[i] == distinct[i].1 {
            k[i] = 0;
            i += 1;
        }
        if i == k.len() {
            return out;
        }
        k[i] += 1;
        let mut acc = 0;
        for (&(x, _), &c) in distinct.iter().zip(&k) {
            for _ in 0..c {
                acc = coord_add(g, acc, x);
            }
        }
        out.insert(acc);
    }
}

/// Closure of a generating set under addition.
pub fn closure(g: &AbelianGroup, gens: &[usize]) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = [0].into();
    let mut frontier = vec![0];
    while let Some(x) = frontier.pop() {
        for &y in gens {
            let z = coord_add(g, x, y);
            if set.insert(z) {
                frontier.push(z);
            }
        }
    }
    set
}

/// All subgroups, as the closures of every generating set of at most
/// `rank` elements.
pub fn subgroups_oracle(g: &AbelianGroup) -> BTreeSet<BTreeSet<usize>> {
    let n = g.order();
    let mut out = BTreeSet::new();
    let mut gens = vec![];
    fn rec(
        g: &AbelianGroup,
        n: usize,
        start: usize,
        left: usize,
        gens: &mut Vec<usize>,
        out: &mut BTreeSet<BTreeSet<usize>>,
    ) {
        out.insert(closure(g, gens));
        if left == 0 {
            return;
        }
        for x in start..n {
            gens.push(x);
            rec(g, n, x + 1, left - 1, gens, out);
            gens.pop();
        }
    }
    rec(g, n, 0, g.rank(), &mut gens, &mut out);
    out
}

/// Regularity from the oracle subgroup list.
pub fn regular_oracle(s: &Sequence, subgroups: &BTreeSet<BTreeSet<usize>>) -> bool {
    let n = s.group().order();
    let t = s.terms();
    subgroups
        .iter()
        .filter(|h| h.len() < n)
        .all(|h| t.iter().filter(|x| h.contains(x)).count() < h.len())
}

/// Does some choice of `aᵢ ∈ {w^0, …, w^{E−1}, free}` make the product of
/// `(X^{gᵢ} − aᵢ)` vanish? Multiplies out in the group basis over a field
/// that also has a unit outside the roots of unity.
pub fn vanishing_oracle(s: &Sequence) -> bool {
    let g = s.group();
    let field = SplittingField::with_free_units(g).unwrap();
    let free = field.free_value().unwrap();
    let values: Vec<u64> = (0..field.exponent())
        .map(|k| field.root_power(k))
        .chain([free])
        .collect();
    let alg = GroupAlgebra::new(g, field).unwrap();
    let terms = s.terms();
    fn rec(
        alg: &GroupAlgebra,
        terms: &[usize],
        values: &[u64],
        acc: &zslab_core::algebra::AlgebraElement,
    ) -> bool {
        if acc.is_zero() {
            return true;
        }
        let Some((&x, rest)) = terms.split_first() else {
            return false;
        };
        values
            .iter()
            .any(|&a| rec(alg, rest, values, &alg.multiply(acc, &alg.binomial(x, a))))
    }
    rec(&alg, &terms, &values, &alg.one())
}
