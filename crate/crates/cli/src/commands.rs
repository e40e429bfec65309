use std::collections::BTreeMap;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use zslab_core::algebra::{
    exists_vanishing_assignment, nonvanishing_witness_search, SplittingField,
};
use zslab_core::invariants::*;
use zslab_core::{AbelianGroup, ElementSet, Regularity, SearchBudget, Sequence, SequenceFile};

use crate::report::{Failure, Outcome, Status};
use crate::{AlgebraCommand, Command, Common, DavenportArg, SearchArgs};

type Res<T> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub fn run(c: &Common, cmd: &Command) -> Res<Outcome> {
    if c.checkpoint.is_some() && !matches!(cmd, Command::C0(_) | Command::SearchExtremal(_)) {
        return Err(usage(
            "--checkpoint is only supported by c0 and search-extremal",
        ));
    }
    match cmd {
        Command::GroupInfo => group_info(c),
        Command::Sigma => sigma(c),
        Command::Regular => regular(c),
        Command::Basis => basis(c),
        Command::Davenport { mode } => davenport_cmd(c, *mode),
        Command::C0(a) => c0(c, a, true),
        Command::SearchExtremal(a) => c0(c, a, false),
        Command::AlgebraCover | Command::Algebra(AlgebraCommand::Cover) => algebra_cover(c),
        Command::AlgebraDwitness(a) | Command::Algebra(AlgebraCommand::Dwitness(a)) => {
            algebra_dwitness(c, a.length)
        }
        Command::Stabilizer { set } => stabilizer_cmd(c, set.as_deref()),
        Command::KneserFuzz { trials, max_order } => kneser_fuzz(c, *trials, *max_order),
        Command::VerifyPaper { q } => verify_paper(*q),
        Command::MonteCarlo {
            q,
            trials,
            length,
            plant_extremal,
        } => monte_carlo(c, *q, *trials, *length, *plant_extremal),
    }
}

fn need_group(c: &Common) -> Res<AbelianGroup> {
    let Some(s) = &c.group else {
        return Err(usage("--group is required"));
    };
    Ok(s.parse()?)
}

/// Reads `--seq`; the group comes from `--group` if given, else the file.
fn need_seq(c: &Common) -> Res<Sequence> {
    let Some(path) = &c.seq else {
        return Err(usage("--seq is required"));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let file: SequenceFile =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let seq = match &c.group {
        Some(g) => file.into_sequence_over(&g.parse()?)?,
        None => file.into_sequence()?,
    };
    Ok(seq)
}

fn need_nonempty_seq(c: &Common) -> Res<Sequence> {
    let s = need_seq(c)?;
    if s.is_empty() {
        return Err(usage("the sequence is empty"));
    }
    Ok(s)
}

fn budget(c: &Common) -> SearchBudget {
    SearchBudget {
        max_nodes: c.budget_nodes,
        max_time: c.budget_seconds.map(Duration::from_secs),
    }
}

fn coords(g: &AbelianGroup, i: usize) -> Value {
    json!(g.coords(i))
}

fn coord_list(g: &AbelianGroup, set: &ElementSet) -> Value {
    set.iter().map(|i| coords(g, i)).collect()
}

/// `Some(p)` for `C_p ⊕ C_p`, p prime.
fn elementary_p(g: &AbelianGroup) -> Option<u64> {
    match *g.factors() {
        [a, b] if a == b && g.smallest_prime() == a => Some(a),
        _ => None,
    }
}

fn group_info(c: &Common) -> Res<Outcome> {
    let g = need_group(c)?;
    let subs = g.all_subgroups()?;
    let mut orders: BTreeMap<usize, usize> = BTreeMap::new();
    for h in subs {
        *orders.entry(h.order).or_default() += 1;
    }
    let known: Vec<Value> = known_invariants(&g)
        .iter()
        .map(|k| json!({"family": k.family, "invariant": k.invariant, "value": k.value, "source": k.source}))
        .collect();
    Ok(Outcome::ok(
        None,
        json!({
            "factors": g.factors(),
            "order": g.order(),
            "exponent": g.exponent(),
            "rank": g.rank(),
            "smallest_prime": g.smallest_prime(),
            "subgroups": subs.len(),
            "subgroup_orders": orders.iter().map(|(o, k)| (o.to_string(), json!(k))).collect::<serde_json::Map<_, _>>(),
            "known_invariants": known,
        }),
    ))
}

fn sigma(c: &Common) -> Res<Outcome> {
    let s = need_nonempty_seq(c)?;
    let g = s.group();
    let sig = s.sigma_set();
    Ok(Outcome::ok(
        None,
        json!({
            "length": s.len(),
            "sum": coords(g, s.sigma_sum()),
            "sigma": coord_list(g, &sig),
            "sigma_size": sig.len(),
            "sigma0_size": s.sigma0_set().len(),
            "zero_sum_free": !sig.contains(0),
            "basis": sig.is_full(),
            "missing": coord_list(g, &s.missing_elements()),
        }),
    ))
}

fn regular(c: &Common) -> Res<Outcome> {
    let s = need_seq(c)?;
    let g = s.group();
    let violation = match s.regularity()? {
        Regularity::Regular => Value::Null,
        Regularity::Violated { subgroup, terms } => json!({
            "subgroup_order": subgroup.order,
            "subgroup_generators": subgroup.generators.iter().map(|&x| coords(g, x)).collect::<Vec<_>>(),
            "terms": terms,
        }),
    };
    Ok(Outcome::ok(
        None,
        json!({"length": s.len(), "regular": violation.is_null(), "violation": violation}),
    ))
}

fn basis(c: &Common) -> Res<Outcome> {
    let s = need_seq(c)?;
    let missing = s.missing_elements();
    Ok(Outcome::ok(
        None,
        json!({
            "length": s.len(),
            "basis": missing.is_empty(),
            "missing": coord_list(s.group(), &missing),
        }),
    ))
}

fn davenport_cmd(c: &Common, mode: DavenportArg) -> Res<Outcome> {
    let g = need_group(c)?;
    let formula = davenport_formula(&g).ok();
    let claim = formula.map(|_| "D(C_n1+C_n2) = n1+n2-1".to_string());
    match mode {
        DavenportArg::Formula => {
            let d = davenport_formula(&g)?;
            Ok(Outcome::ok(
                claim,
                json!({"davenport": d, "mode": "formula"}),
            ))
        }
        DavenportArg::Bruteforce => {
            let r = davenport_search(&g, &budget(c))?;
            let d = r.value.expect("finished search has a value");
            Ok(Outcome::check(
                formula.is_none_or(|f| f == d),
                claim,
                json!({
                    "davenport": d,
                    "mode": "bruteforce",
                    "formula": formula,
                    "witness": r.witness.as_ref().map(Sequence::to_json),
                    "nodes_explored": r.nodes_explored,
                }),
            ))
        }
    }
}

fn c0(c: &Common, a: &SearchArgs, as_c0: bool) -> Res<Outcome> {
    let g = need_group(c)?;
    let opts = SearchOptions {
        cap: a.cap,
        budget: budget(c),
        checkpoint: c.checkpoint.clone(),
        symmetry: !a.no_symmetry,
    };
    let r = longest_regular_nonbasis(&g, &opts)?;
    let p = elementary_p(&g);
    let q = shape_q(&g).ok();
    let claim = match (p, q) {
        (Some(_), _) => Some("c0(C_p+C_p) = 2p-1".to_string()),
        (_, Some(_)) => Some("c0(C3+C3q) = 3q+3".to_string()),
        _ => None,
    };
    let mut result = json!({
        "longest_regular_nonbasis": r.value,
        "witness": r.witness.as_ref().map(Sequence::to_json),
        "nodes_explored": r.nodes_explored,
        "cap": a.cap.unwrap_or(2 * g.order()),
        "cap_hit": r.cap_hit,
        "symmetry": !a.no_symmetry && p.is_some(),
    });
    if as_c0 {
        result["c0"] = json!(r.value.map(|v| v + 1));
    }
    if r.cap_hit {
        return Ok(Outcome {
            status: Status::Unknown,
            claim,
            result,
        });
    }
    let c0 = r.value.map_or(1, |v| v as u64 + 1);
    let expected = match (p, q) {
        (Some(p), _) => Some(2 * p - 1),
        (_, Some(q)) => Some(3 * q + 3),
        _ => None,
    };
    Ok(Outcome::check(
        expected.is_none_or(|e| e == c0),
        claim,
        result,
    ))
}

fn algebra_cover(c: &Common) -> Res<Outcome> {
    let s = need_nonempty_seq(c)?;
    let f = SplittingField::for_group(s.group())?;
    let a = exists_vanishing_assignment(&s)?;
    Ok(Outcome::ok(
        None,
        json!({
            "length": s.len(),
            "vanishes": a.is_some(),
            "assignment": a.map(|a| a.to_json()),
            "field": {"prime": f.prime(), "root": f.root(), "exponent": f.exponent()},
        }),
    ))
}

fn algebra_dwitness(c: &Common, length: usize) -> Res<Outcome> {
    let g = need_group(c)?;
    let w = nonvanishing_witness_search(&g, length, &budget(c))?;
    // d(G, F) = d(G) = D(G) − 1 on C₂ ⊕ C₂ₙ and C₃ ⊕ C₃ₙ.
    let covered = matches!(*g.factors(), [2, _] | [3, _]);
    let (claim, holds) = if covered {
        let d = davenport_formula(&g)? - 1;
        (
            Some("d(G,F) = d(G)".to_string()),
            w.is_some() == (length <= d),
        )
    } else {
        (None, true)
    };
    Ok(Outcome::check(
        holds,
        claim,
        json!({
            "length": length,
            "exists": w.is_some(),
            "witness": w.as_ref().map(Sequence::to_json),
        }),
    ))
}

fn parse_set(g: &AbelianGroup, spec: &str) -> Res<ElementSet> {
    let mut set = ElementSet::empty(g.order());
    for part in spec.split(';').filter(|p| !p.trim().is_empty()) {
        let c: Vec<i64> = part
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| usage(format!("bad element {part:?}")))?;
        set.insert(g.index_of_reduced(&c)?);
    }
    Ok(set)
}

fn stabilizer_cmd(c: &Common, set: Option<&str>) -> Res<Outcome> {
    let (g, a, seq) = match (set, &c.seq) {
        (Some(spec), None) => {
            let g = need_group(c)?;
            let a = parse_set(&g, spec)?;
            (g, a, None)
        }
        (None, Some(_)) => {
            let s = need_seq(c)?;
            (s.group().clone(), s.sigma_set(), Some(s))
        }
        _ => return Err(usage("give exactly one of --set or --seq")),
    };
    let st = stabilizer(&g, &a)?;
    let mut result = json!({
        "set_size": a.len(),
        "stabilizer": {"order": st.order, "members": coord_list(&g, &st.members)},
        "trivial": st.is_trivial(),
    });
    let mut status = Status::Ok;
    let mut claim = None;
    if let Some(s) = seq {
        claim = Some("st(Sigma(S)) = {0} for long regular non-bases".to_string());
        result["lemma"] = match lemma_st0_check(&s)? {
            St0Outcome::NotApplicable(why) => json!({"applicable": false, "reason": why}),
            St0Outcome::Holds => json!({"applicable": true, "holds": true}),
            St0Outcome::Violated(_) => {
                status = Status::Counterexample;
                json!({"applicable": true, "holds": false})
            }
        };
    }
    Ok(Outcome {
        status,
        claim,
        result,
    })
}

/// Every group of order `2..=max`, by invariant factor chains.
pub fn groups_up_to(max: u64) -> Vec<AbelianGroup> {
    fn rec(prefix: &mut Vec<u64>, prod: u64, max: u64, out: &mut Vec<AbelianGroup>) {
        if !prefix.is_empty() {
            out.push(AbelianGroup::new(prefix).expect("valid chain"));
        }
        let step = prefix.last().copied().unwrap_or(1);
        let mut next = if prefix.is_empty() { 2 } else { step };
        while prod * next <= max {
            prefix.push(next);
            rec(prefix, prod * next, max, out);
            prefix.pop();
            next += step;
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), 1, max, &mut out);
    out.sort_by_key(|g| (g.order(), g.factors().to_vec()));
    out
}

fn kneser_fuzz(c: &Common, trials: u64, max_order: u64) -> Res<Outcome> {
    if max_order < 2 {
        return Err(usage("--max-order must be at least 2"));
    }
    let groups = groups_up_to(max_order);
    let results: Vec<Result<Option<Value>, zslab_core::ZsError>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed.wrapping_add(i));
            let g = &groups[rng.gen_range(0..groups.len())];
            let n = g.order();
            let r = rng.gen_range(2..=3);
            let sets: Vec<ElementSet> = (0..r)
                .map(|_| {
                    let size = rng.gen_range(1..=n.div_ceil(2));
                    ElementSet::from_indices(n, (0..size).map(|_| rng.gen_range(0..n)))
                })
                .collect();
            let rep = kneser_check(g, &sets)?;
            Ok((!rep.holds).then(|| {
                json!({
                    "trial": i,
                    "group": g.to_string(),
                    "sets": sets.iter().map(|s| s.iter().collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "lhs": rep.lhs,
                    "rhs": rep.rhs,
                })
            }))
        })
        .collect();
    let mut violations = Vec::new();
    for r in results {
        if let Some(v) = r? {
            violations.push(v);
        }
    }
    Ok(Outcome::check(
        violations.is_empty(),
        Some("Kneser's inequality".to_string()),
        json!({
            "trials": trials,
            "groups": groups.len(),
            "violations": violations.len(),
            "examples": violations.iter().take(10).collect::<Vec<_>>(),
        }),
    ))
}

fn verify_paper(q: u64) -> Res<Outcome> {
    let r = verify_extremal(q)?;
    let g = r.sequence.group().clone();
    let st_trivial = stabilizer(&g, &r.sequence.sigma_set())?.is_trivial();
    Ok(Outcome::check(
        r.holds() && st_trivial,
        Some("c0(C3+C3q) >= 3q+3: regular non-basis of length 3q+2".to_string()),
        json!({
            "q": q,
            "group": g.to_string(),
            "sequence": r.sequence.to_json(),
            "lower_bound_length": r.length,
            "c0_lower_bound": r.lower_bound,
            "regular": r.regular,
            "target": r.target,
            "target_missing": r.target_missing,
            "missing": r.missing,
            "stabilizer_trivial": st_trivial,
        }),
    ))
}

fn monte_carlo(
    c: &Common,
    q: u64,
    trials: u64,
    length: Option<usize>,
    plant_extremal: bool,
) -> Res<Outcome> {
    let mut opts = MonteCarloOptions {
        length,
        planted: vec![],
    };
    if plant_extremal {
        opts.planted.push(extremal_sequence(q)?);
    }
    let r = monte_carlo_theorem(q, trials, c.seed, &opts)?;
    Ok(Outcome::check(
        r.counterexamples.is_empty() && r.planted_counterexamples.is_empty(),
        Some("c0(C3+C3q) <= 3q+3 (sampled)".to_string()),
        json!({
            "q": q,
            "length": r.length,
            "seed": r.seed,
            "trials": r.trials_run,
            "counterexamples": r.counterexamples.len(),
            "examples": r.counterexamples.iter().take(5).map(Sequence::to_json).collect::<Vec<_>>(),
            "planted_counterexamples": r.planted_counterexamples.iter().map(Sequence::to_json).collect::<Vec<_>>(),
        }),
    ))
}
