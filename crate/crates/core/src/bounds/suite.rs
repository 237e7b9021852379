//! Batteries of checks that confront the oracles and constructions with the
//! bound formulas. Each battery stays within its own size caps regardless
//! of `max_n` (exact cliques stop at 6, codec sweeps at 8), and anything
//! that runs out of wall-clock budget is reported as skipped.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use super::{check, inequality_chain_check, theorem1_bounds, theorem3_bounds, BoundReport, Check, Observation, Verdict};
use crate::arith::{factorial, factorial_u64, pow};
use crate::codec::{sweep, Scheme};
use crate::families::{
    block_invariant_family, block_invariant_size, ceil_ratio, encapsulating_construction, greedy_family,
    triple_block_family,
};
use crate::oracle::{count_unrelated_to_identity, max_family_exact, neighborhood_size, Status};
use crate::perm::Permutation;
use crate::relations::{
    find_witness, related_on_positions, triple_class_canonical, Containment, RelationKind,
};
use crate::structure::{edges_order_preserving, interleaved_pair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Lemma1,
    Lemma2,
    Thm1,
    Thm2,
    Thm3,
    Relations,
    All,
}

impl Suite {
    const NAMES: [(Suite, &'static str); 7] = [
        (Suite::Lemma1, "lemma1"),
        (Suite::Lemma2, "lemma2"),
        (Suite::Thm1, "thm1"),
        (Suite::Thm2, "thm2"),
        (Suite::Thm3, "thm3"),
        (Suite::Relations, "relations"),
        (Suite::All, "all"),
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = Suite::NAMES.iter().find(|(s, _)| s == self).unwrap().1;
        f.write_str(name)
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::NAMES
            .iter()
            .find(|(_, name)| *name == s)
            .map(|(suite, _)| *suite)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

const CODEC_CAP: usize = 8;
const COUNT_CAP: usize = 10;
const EXACT_CAP: usize = 6;
const CHARACTERIZATION_CAP: usize = 8;
const PAIRWISE_CAP: usize = 5;
const TRANSLATION_CAP: usize = 4;
const TRIPLE_CLASS_CAP: usize = 6;
const TRIPLE_BLOCK_CAP: usize = 9;
const GREEDY_CAP: usize = 8;
const CHAIN_MAX_N: usize = 20;

struct Harness {
    deadline: Instant,
    checks: Vec<Check>,
    observations: Vec<Observation>,
}

impl Harness {
    fn remaining(&self) -> Duration {
        self.deadline.saturating_duration_since(Instant::now())
    }

    fn skip(&mut self, id: String, description: &str, why: &str) {
        self.checks.push(Check {
            id,
            description: description.into(),
            left: String::new(),
            comparator: String::new(),
            right: why.into(),
            verdict: Verdict::Skipped,
            elapsed_ms: None,
        });
    }

    /// Runs `body` unless the budget is already spent. `body` yields
    /// `(left, comparator, right, ok)`.
    fn run(
        &mut self,
        id: String,
        description: &str,
        body: impl FnOnce() -> (String, &'static str, String, bool),
    ) {
        if self.remaining().is_zero() {
            self.skip(id, description, "budget exhausted");
            return;
        }
        let started = Instant::now();
        let (left, cmp, right, ok) = body();
        self.checks
            .push(check(id, description, left, cmp, right, ok, Some(started.elapsed())));
    }

    fn observe(&mut self, id: String, description: &str, value: impl ToString) {
        self.observations.push(Observation {
            id,
            description: description.into(),
            value: value.to_string(),
        });
    }
}

/// Runs the named battery with sizes up to `max_n` (each battery applies its
/// own caps) inside a wall-clock `budget`.
pub fn verify_suite(suite: Suite, max_n: usize, budget: Duration) -> BoundReport {
    let mut h = Harness {
        deadline: Instant::now() + budget,
        checks: Vec::new(),
        observations: Vec::new(),
    };
    let mut exact = ExactCache::default();
    let run_all = suite == Suite::All;
    if run_all || suite == Suite::Relations {
        relations_battery(&mut h, max_n);
    }
    if run_all || suite == Suite::Lemma1 {
        lemma_battery(&mut h, Scheme::Quinary, max_n);
    }
    if run_all || suite == Suite::Lemma2 {
        lemma_battery(&mut h, Scheme::Parallel, max_n);
    }
    if run_all || suite == Suite::Thm1 {
        packing_battery(&mut h, &mut exact, RelationKind::Disjoint, max_n);
    }
    if run_all || suite == Suite::Thm3 {
        packing_battery(&mut h, &mut exact, RelationKind::Parallel, max_n);
    }
    if run_all || suite == Suite::Thm2 {
        block_battery(&mut h, &mut exact, max_n);
    }
    if run_all {
        reversing_battery(&mut h, &mut exact, max_n);
    }
    let mut report = BoundReport::new(suite.to_string(), h.checks, h.observations);
    report.observations.push(Observation {
        id: "~meta/alpha".into(),
        description: "asymptotic block-fraction parameter; recorded only, no check consumes it".into(),
        value: "n/a".into(),
    });
    report
}

#[derive(Default)]
struct ExactCache {
    values: BTreeMap<(RelationKind, usize), Option<BigUint>>,
}

impl ExactCache {
    /// Exact maximum family size, or `None` when the budget ran out.
    fn get(&mut self, h: &Harness, kind: RelationKind, n: usize) -> Option<BigUint> {
        if let Some(v) = self.values.get(&(kind, n)) {
            return v.clone();
        }
        let remaining = h.remaining();
        let value = if remaining.is_zero() {
            None
        } else {
            let r = max_family_exact(kind, n, Some(remaining)).expect("n within clique limit");
            (r.status == Status::Exact).then_some(r.value)
        };
        self.values.insert((kind, n), value.clone());
        value
    }
}

fn relations_battery(h: &mut Harness, max_n: usize) {
    for n in 1..=max_n.min(PAIRWISE_CAP) {
        let perms: Vec<Permutation> = Permutation::all(n).collect();
        for kind in RelationKind::ALL {
            h.run(
                format!("relations/{kind}/symmetric-irreflexive/n={n:02}"),
                "R(s,t) <=> R(t,s), R(s,s) never, witnesses re-validate (all pairs)",
                || {
                    let mut bad = 0u64;
                    for s in &perms {
                        for t in &perms {
                            let st = find_witness(kind, Containment::Strict, s, t).unwrap();
                            let ts = find_witness(kind, Containment::Strict, t, s).unwrap();
                            let valid = st.is_none_or(|w| w.validate(kind, Containment::Strict, s, t));
                            if st.is_some() != ts.is_some() || (s == t && st.is_some()) || !valid {
                                bad += 1;
                            }
                        }
                    }
                    (bad.to_string(), "==", "0".into(), bad == 0)
                },
            );
        }
    }
    for n in 1..=max_n.min(TRANSLATION_CAP) {
        let perms: Vec<Permutation> = Permutation::all(n).collect();
        for kind in RelationKind::ALL {
            h.run(
                format!("relations/{kind}/left-translation/n={n:02}"),
                "R(s,t) <=> R(p.s, p.t) for all p, s, t",
                || {
                    let mut bad = 0u64;
                    for s in &perms {
                        for t in &perms {
                            let base = find_witness(kind, Containment::Strict, s, t).unwrap().is_some();
                            for pi in &perms {
                                let moved = find_witness(kind, Containment::Strict, &pi.compose(s), &pi.compose(t))
                                    .unwrap()
                                    .is_some();
                                if moved != base {
                                    bad += 1;
                                }
                            }
                        }
                    }
                    (bad.to_string(), "==", "0".into(), bad == 0)
                },
            );
        }
    }
    for n in 1..=max_n.min(CHARACTERIZATION_CAP) {
        h.run(
            format!("relations/structure/disjoint-iff-interleaved/n={n:02}"),
            "locally_disjoint(p, id) <=> interleaved_pair(p) present",
            || {
                let id: Vec<usize> = (1..=n).collect();
                let bad = Permutation::all(n)
                    .filter(|p| {
                        related_on_positions(RelationKind::Disjoint, &id, &p.positions())
                            != interleaved_pair(p).is_some()
                    })
                    .count();
                (bad.to_string(), "==", "0".into(), bad == 0)
            },
        );
        h.run(
            format!("relations/structure/parallel-free-iff-order-preserving/n={n:02}"),
            "not locally_parallel(p, id) <=> same-direction edges keep tail order at heads",
            || {
                let id: Vec<usize> = (1..=n).collect();
                let bad = Permutation::all(n)
                    .filter(|p| {
                        !related_on_positions(RelationKind::Parallel, &id, &p.positions()) != edges_order_preserving(p)
                    })
                    .count();
                (bad.to_string(), "==", "0".into(), bad == 0)
            },
        );
    }
    for n in 1..=max_n.min(PAIRWISE_CAP) {
        for kind in RelationKind::ALL {
            h.run(
                format!("relations/{kind}/neighbourhood-constant/n={n:02}"),
                "number of permutations unrelated to s is the same for every s",
                || {
                    let sizes: std::collections::BTreeSet<u64> = Permutation::all(n)
                        .map(|s| neighborhood_size(kind, &s).unwrap())
                        .collect();
                    let shown = sizes.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
                    (format!("{{{shown}}}"), "distinct values ==", "1".into(), sizes.len() == 1)
                },
            );
        }
    }
}

fn lemma_battery(h: &mut Harness, scheme: Scheme, max_n: usize) {
    let (name, kind, quantity) = match scheme {
        Scheme::Quinary => ("lemma1", RelationKind::Disjoint, "G"),
        Scheme::Parallel => ("lemma2", RelationKind::Parallel, "H"),
    };
    let base = scheme.bound_base();
    let mut counts = BTreeMap::new();
    for n in 1..=max_n.min(COUNT_CAP) {
        h.run(
            format!("{name}/count/n={n:02}"),
            &format!("{quantity}(n) <= {base}^n by exhaustive enumeration"),
            || {
                let v = count_unrelated_to_identity(kind, n).unwrap().value;
                let bound = pow(base, n);
                let ok = v <= bound;
                counts.insert(n, v.clone());
                (v.to_string(), "<=", bound.to_string(), ok)
            },
        );
    }
    if let Some(g3) = counts.get(&3).filter(|_| scheme == Scheme::Quinary) {
        let g3 = g3.clone();
        h.run(format!("{name}/count/n=03-exact"), "G(3) = 3! = 6", || {
            (g3.to_string(), "==", "6".into(), g3 == BigUint::from(6u32))
        });
    }
    for n in 1..=max_n.min(CODEC_CAP) {
        let mut used = String::new();
        h.run(
            format!("{name}/codec/n={n:02}"),
            "eligible permutations encode without structure violations, decode back, and get distinct code words",
            || {
                let s = sweep(scheme, n);
                used = s.symbols_used.clone();
                let ok = s.injective() && counts.get(&n).is_none_or(|c| BigUint::from(s.eligible) == *c);
                (
                    format!(
                        "codes={} round_trip_failures={} structure_violations={}",
                        s.distinct_codes, s.round_trip_failures, s.structure_violations
                    ),
                    "==",
                    format!("eligible={}", s.eligible),
                    ok,
                )
            },
        );
        h.observe(format!("{name}/codec/n={n:02}/symbols"), "symbols used by code words", used);
    }
    if scheme == Scheme::Parallel {
        for (n, v) in &counts {
            let within = *v <= pow(5, *n);
            h.observe(
                format!("{name}/count/n={n:02}/five-letter"),
                "exploratory: H(n) <= 5^n (not asserted)",
                format!("{v} <= {} is {within}", pow(5, *n)),
            );
        }
    }
}

type BoundPair = fn(usize) -> (BigUint, BigUint);

fn packing_battery(h: &mut Harness, exact: &mut ExactCache, kind: RelationKind, max_n: usize) {
    let (name, base, bounds): (_, u64, BoundPair) = match kind {
        RelationKind::Disjoint => ("thm1", 5, theorem1_bounds),
        _ => ("thm3", 6, theorem3_bounds),
    };
    h.run(format!("{name}/bounds-ordered"), "lower <= upper for n in 1..=40", || {
        let bad = (1..=40).filter(|&n| {
            let (lo, hi) = bounds(n);
            lo > hi
        });
        let bad: Vec<_> = bad.collect();
        (format!("{bad:?}"), "==", "[]".into(), bad.is_empty())
    });
    for n in 1..=max_n.min(GREEDY_CAP) {
        h.run(
            format!("{name}/greedy/n={n:02}"),
            &format!("greedy family size >= ceil(n!/{base}^n), members pairwise related"),
            || {
                let fam = greedy_family(kind, n).unwrap();
                let lower = bounds(n).0;
                let ok = BigUint::from(fam.size) >= lower && fam.verify().is_ok();
                (fam.size.to_string(), ">=", lower.to_string(), ok)
            },
        );
    }
    for n in 1..=max_n.min(TRIPLE_CLASS_CAP) {
        h.run(
            format!("{name}/triple-class/n={n:02}"),
            &format!("distinct permutations with equal triple-class form are not {kind}"),
            || {
                let mut classes: BTreeMap<Permutation, Vec<Vec<usize>>> = BTreeMap::new();
                for p in Permutation::all(n) {
                    classes.entry(triple_class_canonical(&p)).or_default().push(p.positions());
                }
                let mut bad = 0u64;
                for members in classes.values() {
                    for (i, a) in members.iter().enumerate() {
                        for b in &members[i + 1..] {
                            if related_on_positions(kind, a, b) {
                                bad += 1;
                            }
                        }
                    }
                }
                (bad.to_string(), "==", "0".into(), bad == 0)
            },
        );
    }
    for n in 1..=max_n.min(TRIPLE_BLOCK_CAP) {
        h.run(
            format!("{name}/triple-block/n={n:02}"),
            "triple-block family has 6^floor(n/3) members, none locally disjoint or parallel",
            || {
                let fam = triple_block_family(n).unwrap();
                let expected = pow(6, n / 3);
                let ok = BigUint::from(fam.size) == expected && fam.verify().is_ok();
                (fam.size.to_string(), "==", expected.to_string(), ok)
            },
        );
    }
    let quantity = if kind == RelationKind::Disjoint { "M" } else { "P" };
    let mut previous: Option<BigUint> = None;
    for n in 1..=max_n.min(EXACT_CAP) {
        let id = format!("{name}/exact/n={n:02}");
        let desc = format!("ceil(n!/{base}^n) <= {quantity}(n) <= n!/6^floor(n/3)");
        let Some(v) = exact.get(h, kind, n) else {
            h.skip(id, &desc, "budget exhausted");
            previous = None;
            continue;
        };
        let (lo, hi) = bounds(n);
        h.run(id, &desc, || {
            (v.to_string(), "in", format!("[{lo}, {hi}]"), lo <= v && v <= hi)
        });
        if n == 3 {
            h.run(format!("{name}/exact/n=03-exact"), &format!("{quantity}(3) = 1"), || {
                (v.to_string(), "==", "1".into(), v == BigUint::from(1u32))
            });
        }
        if let Some(prev) = previous.replace(v.clone()) {
            h.run(format!("{name}/monotone/n={n:02}"), &format!("{quantity}(n-1) <= {quantity}(n)"), || {
                (prev.to_string(), "<=", v.to_string(), prev <= v)
            });
        }
    }
}

fn block_battery(h: &mut Harness, exact: &mut ExactCache, max_n: usize) {
    let budget = factorial_u64(10).unwrap();
    let mut best_construction: BTreeMap<usize, usize> = BTreeMap::new();
    for n in 2..=max_n {
        for k in (2..=n).filter(|k| n % k == 0) {
            let size = block_invariant_size(n, k).unwrap();
            if size > BigUint::from(budget) {
                h.observe(
                    format!("thm2/construction/n={n:02}/k={k:02}"),
                    "block-invariant set beyond the enumeration budget; not built",
                    size,
                );
                continue;
            }
            h.run(
                format!("thm2/block-invariant/n={n:02}/k={k:02}"),
                "|Q| = ((n/k)!)^k",
                || {
                    let q = block_invariant_family(n, k).unwrap();
                    (q.size.to_string(), "==", size.to_string(), BigUint::from(q.size) == size)
                },
            );
            h.run(
                format!("thm2/construction/n={n:02}/k={k:02}"),
                "pairwise encapsulating, size >= ceil(((n/k)!)^(k-1)/k)",
                || match encapsulating_construction(n, k) {
                    Ok(c) => {
                        let g = ceil_ratio(c.guarantee.as_ref().unwrap());
                        let entry = best_construction.entry(n).or_default();
                        *entry = (*entry).max(c.size);
                        (c.size.to_string(), ">=", g.to_string(), c.meets_guarantee())
                    }
                    Err(e) => (e.to_string(), "", String::new(), false),
                },
            );
        }
    }
    for n in 2..=CHAIN_MAX_N.max(max_n) {
        for k in (2..=n).filter(|k| n % k == 0) {
            let r = inequality_chain_check(n, k).unwrap();
            h.checks.extend(r.checks.into_iter().map(|mut c| {
                c.id = format!("thm2/{}", c.id);
                c
            }));
        }
    }
    let mut previous: Option<BigUint> = None;
    for n in 1..=max_n.min(PAIRWISE_CAP) {
        let id = format!("thm2/exact/n={n:02}");
        let desc = "max construction size <= N(n) <= n!";
        let Some(v) = exact.get(h, RelationKind::Encapsulating, n) else {
            h.skip(id, desc, "budget exhausted");
            previous = None;
            continue;
        };
        let lo = BigUint::from(best_construction.get(&n).copied().unwrap_or(1));
        let hi = factorial(n);
        h.run(id, desc, || {
            (v.to_string(), "in", format!("[{lo}, {hi}]"), lo <= v && v <= hi)
        });
        if let Some(prev) = previous.replace(v.clone()) {
            h.run(format!("thm2/monotone/n={n:02}"), "N(n-1) <= N(n)", || {
                (prev.to_string(), "<=", v.to_string(), prev <= v)
            });
        }
    }
}

fn reversing_battery(h: &mut Harness, exact: &mut ExactCache, max_n: usize) {
    let mut previous: Option<BigUint> = None;
    for n in 1..=max_n.min(PAIRWISE_CAP) {
        let Some(v) = exact.get(h, RelationKind::Reversing, n) else {
            h.skip(format!("reversing/monotone/n={n:02}"), "F(n-1) <= F(n)", "budget exhausted");
            previous = None;
            continue;
        };
        h.observe(format!("reversing/exact/n={n:02}"), "F(n), exploratory", &v);
        if let Some(prev) = previous.replace(v.clone()) {
            h.run(format!("reversing/monotone/n={n:02}"), "F(n-1) <= F(n)", || {
                (prev.to_string(), "<=", v.to_string(), prev <= v)
            });
        }
    }
}
