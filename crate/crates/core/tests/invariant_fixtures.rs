mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zslab_core::invariants::*;
use zslab_core::sequence::random_regular_extending;
use zslab_core::{AbelianGroup, ElementSet, SearchBudget, Sequence};

fn stabilizer_oracle(g: &AbelianGroup, a: &ElementSet) -> Vec<usize> {
    (0..g.order())
        .filter(|&x| a.iter().all(|y| a.contains(coord_add(g, x, y))))
        .collect()
}

fn set_strategy() -> impl Strategy<Value = (AbelianGroup, Vec<Vec<usize>>)> {
    prop::sample::select(SMALL_GROUPS).prop_flat_map(|m| {
        let g = group(m);
        let n = g.order();
        let sets = prop::collection::vec(prop::collection::vec(0..n, 1..8), 1..4);
        (Just(g), sets)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn stabilizer_matches_scan((g, sets) in set_strategy()) {
        let n = g.order();
        let a = ElementSet::from_indices(n, sets[0].iter().copied());
        let st = stabilizer(&g, &a).unwrap();
        prop_assert_eq!(st.members.iter().collect::<Vec<_>>(), stabilizer_oracle(&g, &a));
        // A is a union of st(A)-cosets.
        prop_assert_eq!(g.sumset(&a, &st.members), a);
    }

    #[test]
    fn kneser_holds((g, sets) in set_strategy()) {
        let n = g.order();
        let sets: Vec<ElementSet> = sets.iter().map(|s| ElementSet::from_indices(n, s.iter().copied())).collect();
        let r = kneser_check(&g, &sets).unwrap();
        prop_assert!(r.holds, "{:?}", r);
    }
}

#[test]
fn davenport_bruteforce_agrees_with_formula() {
    for n in 2u64..=36 {
        for n1 in 1..=n {
            if n % (n1 * n1) != 0 || (n / n1) % n1 != 0 {
                continue;
            }
            let m: Vec<u64> = if n1 == 1 { vec![n] } else { vec![n1, n / n1] };
            let g = group(&m);
            let r = davenport_search(&g, &SearchBudget::unlimited()).unwrap();
            let expected = m.iter().sum::<u64>() as usize - (m.len() - 1);
            assert_eq!(r.value, Some(expected), "{g}");
            let w = r.witness.unwrap();
            assert_eq!(w.len(), expected - 1);
            assert!(!w.sigma_set().contains(0));
        }
    }
}

#[test]
fn davenport_rank3_small() {
    // D(C₂³) = 4 and D(C₂⊕C₂⊕C₄) = 6, from the p-group formula 1 + Σ(nᵢ − 1).
    assert_eq!(
        davenport(&group(&[2, 2, 2]), DavenportMode::BruteForce).unwrap(),
        4
    );
    assert_eq!(
        davenport(&group(&[2, 2, 4]), DavenportMode::BruteForce).unwrap(),
        6
    );
}

/// Longest regular non-basis over `G` from the oracles alone, enumerating
/// multisets level by level until a level has none.
fn c0_oracle(g: &AbelianGroup, max_len: usize) -> usize {
    let subs = subgroups_oracle(g);
    let n = g.order();
    let mut level = vec![(Sequence::new(g), 1usize)];
    let mut best = 0;
    for len in 1..=max_len {
        let mut next = vec![];
        for (s, start) in &level {
            for x in *start..n {
                let t = s.with_term(x);
                if regular_oracle(&t, &subs) {
                    next.push((t, x));
                }
            }
        }
        if next.iter().any(|(s, _)| sigma_oracle(s).len() < n) {
            best = len;
        }
        level = next;
    }
    best
}

#[test]
fn c0_small_groups_match_oracle() {
    for (m, max_len) in [
        (&[2u64, 2][..], 6),
        (&[3, 3], 9),
        (&[6], 12),
        (&[4], 8),
        (&[2, 4], 10),
    ] {
        let g = group(m);
        let rep = longest_regular_nonbasis(&g, &SearchOptions::default()).unwrap();
        assert_eq!(rep.value, Some(c0_oracle(&g, max_len)), "{g}");
    }
}

#[test]
fn c0_of_c6() {
    // 1⁵ is regular and misses 0; every regular sequence of length 6 is a basis.
    assert_eq!(
        c0_exact(&group(&[6]), &SearchOptions::default()).unwrap(),
        6
    );
}

#[test]
fn rank2_inverse_p3_counts() {
    // Four lines, two nonzero points each: a line holding k ≤ 2 terms
    // contributes 1, 2, 3 multisets; read off the x⁴ coefficient of
    // (1 + 2x + 3x²)⁴.
    let line = [1u64, 2, 3];
    let mut poly = vec![1u64];
    for _ in 0..4 {
        let mut next = vec![0; poly.len() + 2];
        for (i, a) in poly.iter().enumerate() {
            for (j, b) in line.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        poly = next;
    }
    let r = rank2_inverse_check(3).unwrap();
    assert_eq!(r.checked, poly[4]);
    assert_eq!(r.checked, 214);
    assert!(r.holds());
    assert!(r.min_sigma0 >= 8);
}

#[test]
fn cyclic_inverse_up_to_twelve() {
    for n in 2..=12 {
        let r = cyclic_inverse_check(n).unwrap();
        assert!(r.holds(), "n = {n}");
        let gens = (1..n)
            .filter(|&g| zslab_core::group::gcd(g, n) == 1)
            .count();
        assert_eq!(r.non_bases.len(), gens, "n = {n}");
    }
}

#[test]
fn st0_on_extremal_and_gates() {
    let s = extremal_sequence(5).unwrap();
    assert_eq!(lemma_st0_check(&s).unwrap(), St0Outcome::Holds);
    let g = s.group().clone();
    let sigma = s.sigma_set();
    assert_eq!(stabilizer_oracle(&g, &sigma), vec![0]);
    let short = random_regular_extending(
        &Sequence::new(&g),
        10,
        &mut ChaCha8Rng::seed_from_u64(3),
        1000,
    )
    .unwrap();
    assert!(matches!(
        lemma_st0_check(&short).unwrap(),
        St0Outcome::NotApplicable(_)
    ));
    let basis = zslab_core::random_regular(&g, 18, 1).unwrap();
    assert!(basis.is_basis());
    assert!(matches!(
        lemma_st0_check(&basis).unwrap(),
        St0Outcome::NotApplicable(_)
    ));
}

fn planted(q: u64, prefix: &[[i64; 2]], seed: u64) -> Sequence {
    let g = target_group(q).unwrap();
    let mut s = Sequence::new(&g);
    for c in prefix {
        s.push(g.index_of_reduced(c).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_regular_extending(&s, 3 * q as usize + 3, &mut rng, 1_000_000).unwrap()
}

#[test]
fn basic_lemma_subgroup_cover() {
    for seed in 0..10 {
        let s = planted(5, &[[0, 5], [0, 10]], seed);
        let g = s.group().clone();
        let h = g.cyclic_subgroup(g.index_of_reduced(&[0, 5]).unwrap());
        let v =
            lemma_basic_check(&s, &BasicLemmaCertificate::SubgroupCover { subgroup: h }).unwrap();
        assert_eq!(v, CertificateVerdict::Accepted);
        assert_eq!(sigma_oracle(&s).len(), 45);
        let v = lemma_basic_check(
            &s,
            &BasicLemmaCertificate::SubgroupCover {
                subgroup: g.trivial_subgroup(),
            },
        )
        .unwrap();
        assert_eq!(
            v,
            CertificateVerdict::Rejected(RejectReason::NontrivialityRequired)
        );
    }
}

#[test]
fn basic_lemma_coset_growth() {
    for seed in 0..10 {
        let s = planted(5, &[[0, 5], [0, 10]], 100 + seed);
        let g = s.group().clone();
        let sub = Sequence::from_indices(
            &g,
            [
                g.index_of_reduced(&[0, 5]).unwrap(),
                g.index_of_reduced(&[0, 10]).unwrap(),
            ],
        );
        let h = g.cyclic_subgroup(sub.terms()[0]);
        let cert = BasicLemmaCertificate::CosetGrowth {
            sub: sub.clone(),
            subgroup: h.clone(),
            shift: 0,
        };
        let v = lemma_basic_check(&s, &cert).unwrap();
        // Oracle for the inequality: M from a direct scan.
        let rest = s.without(&sub).unwrap();
        let a = g.sumset(&h.members, &rest.sigma0_set());
        let m = stabilizer_oracle(&g, &a);
        let in_m = |x: &usize| m.contains(x);
        let union = s.terms().iter().filter(|x| in_m(x)).count()
            + sub.terms().iter().filter(|x| !in_m(x)).count();
        let lhs = (18 - union + 1) * m.len();
        if lhs >= 45 {
            assert_eq!(v, CertificateVerdict::Accepted);
            assert!(s.is_basis());
        } else {
            assert!(matches!(
                v,
                CertificateVerdict::Rejected(RejectReason::InequalityFails { .. })
            ));
        }
        // A sub-sequence that does not divide S.
        let bogus = Sequence::power(&g, sub.terms()[0], 10);
        let v = lemma_basic_check(
            &s,
            &BasicLemmaCertificate::CosetGrowth {
                sub: bogus,
                subgroup: h,
                shift: 0,
            },
        )
        .unwrap();
        assert_eq!(
            v,
            CertificateVerdict::Rejected(RejectReason::NotASubsequence)
        );
    }
}

/// Cover oracle restricted to the values each term can actually take:
/// a value that is no character value of `gᵢ` kills nothing.
fn cover_oracle(s: &Sequence) -> bool {
    let g = s.group();
    let n = g.order();
    let terms = s.terms();
    fn rec(g: &AbelianGroup, terms: &[usize], alive: Vec<usize>) -> bool {
        if alive.is_empty() {
            return true;
        }
        let Some((&x, rest)) = terms.split_first() else {
            return false;
        };
        if rec(g, rest, alive.clone()) {
            return true;
        }
        let mut values: Vec<u64> = alive.iter().map(|&c| g.pairing(x, c)).collect();
        values.sort_unstable();
        values.dedup();
        values.into_iter().any(|k| {
            let left = alive
                .iter()
                .copied()
                .filter(|&c| g.pairing(x, c) != k)
                .collect();
            rec(g, rest, left)
        })
    }
    rec(g, &terms, (0..n).collect())
}

#[test]
fn basic_lemma_vanishing_variant() {
    let g = target_group(5).unwrap();
    let h = g.torsion(3);
    let k = g.torsion(5);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut accepted = 0;
    for seed in 0..40 {
        // Plant at least six terms from H ∪ K, then fill up.
        let pool: Vec<usize> = h
            .members
            .iter()
            .chain(k.members.iter())
            .filter(|&x| x != 0)
            .collect();
        let mut prefix = Sequence::new(&g);
        let mut counter = zslab_core::sequence::RegularityCounter::new(&g).unwrap();
        while prefix.len() < 6 + seed % 4 {
            let x = pool[rng.gen_range(0..pool.len())];
            if counter.try_push(x) {
                prefix.push(x);
            }
        }
        let s = random_regular_extending(
            &prefix,
            18,
            &mut ChaCha8Rng::seed_from_u64(seed as u64),
            1_000_000,
        )
        .unwrap();
        let part = s.restrict(&h).concat(&s.restrict(&k));
        assert!(part.len() >= 6);
        let v = lemma_basic_check(&s, &BasicLemmaCertificate::Vanishing).unwrap();
        if cover_oracle(&part) {
            assert_eq!(v, CertificateVerdict::Accepted, "{s:?}");
            assert!(s.is_basis());
            accepted += 1;
        } else {
            assert_eq!(
                v,
                CertificateVerdict::Rejected(RejectReason::NoVanishingAssignment)
            );
        }
    }
    assert!(accepted > 0);
}

#[test]
fn extremal_reports() {
    for (q, missing) in [(5u64, [2i64, 12]), (7, [2, 18])] {
        let r = verify_extremal(q).unwrap();
        assert!(r.holds());
        assert_eq!(r.length as u64, 3 * q + 2);
        let g = r.sequence.group().clone();
        let t = g.index_of_reduced(&missing).unwrap();
        assert!(!sigma_oracle(&r.sequence).contains(&t));
    }
}

#[test]
fn monte_carlo_small_run_finds_nothing() {
    let r = monte_carlo_theorem(5, 300, 42, &MonteCarloOptions::default()).unwrap();
    assert!(r.counterexamples.is_empty());
    assert_eq!(r.trials_run, 300);
}

#[test]
fn davenport_budget_is_reported() {
    let g = group(&[6, 6]);
    assert!(davenport_search(&g, &SearchBudget::nodes(1000)).is_err());
}
