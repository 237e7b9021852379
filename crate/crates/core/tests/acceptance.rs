//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Runs without the libtest harness so the report prints in order even when
//! a criterion panics.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde_json::json;

use interlock::arith::{factorial, pow};
use interlock::bounds::{inequality_chain_check, theorem1_bounds, theorem3_bounds};
use interlock::cli::cache::{Cache, CacheKey};
use interlock::codec::{sweep, Scheme};
use interlock::families::{
    block_invariant_family, block_invariant_size, ceil_ratio, encapsulating_construction, encapsulating_guarantee,
    greedy_family, greedy_guarantee,
};
use interlock::oracle::{self, count_unrelated_to_identity, max_family_exact, neighborhood_size, ExactResult, Status};
use interlock::perm::Permutation;
use interlock::relations::{related, triple_class_canonical};
use interlock::structure::{edges_order_preserving, interleaved_pair};
use interlock::RelationKind::{self, *};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !($cond) {
            return Err(format!($($msg)+));
        }
    };
}

const EXACT_BUDGET: Duration = Duration::from_secs(600);

fn count(kind: RelationKind, n: usize) -> BigUint {
    count_unrelated_to_identity(kind, n).unwrap().value
}

fn c1_quinary_count_bound() -> Outcome {
    let started = Instant::now();
    let mut values = Vec::new();
    for n in 1..=9 {
        let g = count(Disjoint, n);
        ensure!(g <= pow(5, n), "G({n}) = {g} exceeds 5^{n}");
        values.push(g.to_string());
    }
    ensure!(values[2] == "6", "G(3) = {}, expected 6", values[2]);
    let secs = started.elapsed().as_secs_f64();
    ensure!(started.elapsed() < Duration::from_secs(600), "enumeration took {secs:.1}s");
    Ok(format!("G(1..9) = [{}] in {secs:.1}s", values.join(", ")))
}

fn codec_sweeps(scheme: Scheme, kind: RelationKind) -> Result<Vec<String>, String> {
    let mut symbols = Vec::new();
    for n in 1..=8 {
        let s = sweep(scheme, n);
        ensure!(s.structure_violations == 0, "{scheme} n={n}: {} structure violations", s.structure_violations);
        ensure!(s.round_trip_failures == 0, "{scheme} n={n}: {} round-trip failures", s.round_trip_failures);
        ensure!(s.distinct_codes == s.eligible, "{scheme} n={n}: codes collide");
        let expected = count(kind, n);
        ensure!(BigUint::from(s.eligible) == expected, "{scheme} n={n}: swept {} of {expected}", s.eligible);
        ensure!(
            BigUint::from(s.distinct_codes) <= pow(scheme.bound_base(), n),
            "{scheme} n={n}: more codes than {}^n",
            scheme.bound_base()
        );
        symbols.push(format!("n={n}:{}", s.symbols_used));
    }
    Ok(symbols)
}

fn c2_quinary_codec() -> Outcome {
    codec_sweeps(Scheme::Quinary, Disjoint)?;
    Ok("encode ok, decode(encode) = id, codes distinct for n = 1..8".into())
}

fn c3_parallel_count_and_codec() -> Outcome {
    let mut values = Vec::new();
    for n in 1..=9 {
        let h = count(Parallel, n);
        ensure!(h <= pow(6, n), "H({n}) = {h} exceeds 6^{n}");
        values.push(h.to_string());
    }
    let symbols = codec_sweeps(Scheme::Parallel, Parallel)?;
    Ok(format!(
        "H(1..9) = [{}]; parallel codec injective n = 1..8; symbols used {}",
        values.join(", "),
        symbols.last().unwrap()
    ))
}

fn greedy_meets(kind: RelationKind) -> Result<Vec<usize>, String> {
    let mut sizes = Vec::new();
    for n in 1..=8 {
        let fam = greedy_family(kind, n).map_err(|e| e.to_string())?;
        let floor = ceil_ratio(&greedy_guarantee(kind, n).unwrap());
        ensure!(BigUint::from(fam.size) >= floor, "greedy {kind} n={n}: {} < {floor}", fam.size);
        let images: Vec<Vec<usize>> = fam.members.iter().map(|p| p.image().to_vec()).collect();
        ensure!(common::pairwise_related(kind, &images), "greedy {kind} n={n}: unrelated pair admitted");
        sizes.push(fam.size);
    }
    Ok(sizes)
}

fn triple_class_sound(kind: RelationKind, max_n: usize) -> Result<(), String> {
    for n in 1..=max_n {
        let mut classes: HashMap<Permutation, Vec<Permutation>> = HashMap::new();
        for p in Permutation::all(n) {
            classes.entry(triple_class_canonical(&p)).or_default().push(p);
        }
        for members in classes.values() {
            for (i, s) in members.iter().enumerate() {
                for t in &members[i + 1..] {
                    ensure!(
                        !common::related(kind, s.image(), t.image()),
                        "{s} and {t} share a triple class but are {kind}"
                    );
                }
            }
        }
    }
    Ok(())
}

fn exact_in_bounds(
    kind: RelationKind,
    ns: impl Iterator<Item = usize>,
    bounds: fn(usize) -> (BigUint, BigUint),
) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for n in ns {
        let r = max_family_exact(kind, n, Some(EXACT_BUDGET)).map_err(|e| e.to_string())?;
        ensure!(r.status == Status::Exact, "{kind} n={n}: budget exhausted at {}", r.value);
        let (lo, hi) = bounds(n);
        ensure!(lo <= r.value && r.value <= hi, "{kind} n={n}: {} outside [{lo}, {hi}]", r.value);
        let fam: Vec<Vec<usize>> = r.witness_family.unwrap().iter().map(|p| p.image().to_vec()).collect();
        ensure!(BigUint::from(fam.len()) == r.value, "{kind} n={n}: witness size mismatch");
        ensure!(common::pairwise_related(kind, &fam), "{kind} n={n}: witness family not pairwise related");
        out.push(format!("{}({n})={}", r.quantity, r.value));
    }
    Ok(out)
}

fn c4_disjoint_packing() -> Outcome {
    let sizes = greedy_meets(Disjoint)?;
    triple_class_sound(Disjoint, 6)?;
    let exact = exact_in_bounds(Disjoint, 1..=6, theorem1_bounds)?;
    ensure!(exact[2] == "M(3)=1", "{} , expected M(3)=1", exact[2]);
    Ok(format!("greedy sizes {sizes:?}; triple classes sound n<=6; {}", exact.join(" ")))
}

fn c5_encapsulating_blocks() -> Outcome {
    let mut sizes = Vec::new();
    for (n, k) in [(4, 2), (6, 2), (6, 3), (8, 2), (9, 3)] {
        let q = block_invariant_family(n, k).map_err(|e| e.to_string())?;
        let expected = num_traits::pow(factorial(n / k), k);
        ensure!(block_invariant_size(n, k).unwrap() == expected, "block count formula at ({n},{k})");
        ensure!(BigUint::from(q.size) == expected, "({n},{k}): |Q| = {} != {expected}", q.size);
        let fam = encapsulating_construction(n, k).map_err(|e| e.to_string())?;
        let floor = ceil_ratio(&encapsulating_guarantee(n, k).unwrap());
        ensure!(BigUint::from(fam.size) >= floor, "({n},{k}): {} < {floor}", fam.size);
        let images: Vec<Vec<usize>> = fam.members.iter().map(|p| p.image().to_vec()).collect();
        ensure!(
            common::pairwise_related(Encapsulating, &images),
            "({n},{k}): construction not pairwise encapsulating"
        );
        sizes.push(format!("({n},{k}):{}>={floor}", fam.size));
    }
    let mut chains = 0;
    for n in 2..=20 {
        for k in (2..=n).filter(|k| n % k == 0) {
            let r = inequality_chain_check(n, k).map_err(|e| e.to_string())?;
            if let Some(c) = r.failures().next() {
                return Err(format!("{}: {} {} {}", c.id, c.left, c.comparator, c.right));
            }
            chains += 1;
        }
    }
    Ok(format!("sizes {}; {chains} inequality chains pass", sizes.join(" ")))
}

fn c6_parallel_packing() -> Outcome {
    let sizes = greedy_meets(Parallel)?;
    triple_class_sound(Parallel, 6)?;
    let exact = exact_in_bounds(Parallel, 1..=5, theorem3_bounds)?;
    ensure!(exact[2] == "P(3)=1", "{}, expected P(3)=1", exact[2]);
    Ok(format!("greedy sizes {sizes:?}; triple classes sound n<=6; {}", exact.join(" ")))
}

fn c7_characterizations() -> Outcome {
    for n in 1..=8 {
        let id = Permutation::identity(n);
        for s in Permutation::all(n) {
            let disjoint = related(Disjoint, &s, &id).unwrap().is_some();
            ensure!(
                disjoint == interleaved_pair(&s).is_some(),
                "{s}: locally disjoint = {disjoint}, interleaved pair = {:?}",
                interleaved_pair(&s)
            );
            let parallel = related(Parallel, &s, &id).unwrap().is_some();
            ensure!(
                !parallel == edges_order_preserving(&s),
                "{s}: locally parallel = {parallel} but order preserving = {}",
                edges_order_preserving(&s)
            );
        }
    }
    let mut sizes = Vec::new();
    for kind in RelationKind::ALL {
        for n in 1..=5 {
            let id_size = neighborhood_size(kind, &Permutation::identity(n)).unwrap();
            for s in Permutation::all(n) {
                let v = neighborhood_size(kind, &s).unwrap();
                ensure!(v == id_size, "{kind} n={n}: {s} has {v}, identity has {id_size}");
            }
        }
        sizes.push(format!("{kind}:{}", neighborhood_size(kind, &Permutation::identity(5)).unwrap()));
    }
    Ok(format!("both equivalences hold for n<=8; neighbourhoods constant n<=5 ({})", sizes.join(" ")))
}

fn stripped(r: &ExactResult) -> String {
    let mut r = r.clone();
    r.elapsed = Duration::ZERO;
    serde_json::to_string(&r).unwrap()
}

fn c8_cross_validation() -> Outcome {
    for kind in RelationKind::ALL {
        let fast = max_family_exact(kind, 4, None).unwrap().value;
        let naive = common::max_family(kind, 4);
        ensure!(fast == BigUint::from(naive), "{kind} n=4: solver {fast}, naive {naive}");
    }
    for kind in [Disjoint, Parallel] {
        for n in 1..=6 {
            let fast = count(kind, n);
            let naive = common::count_unrelated(kind, n);
            ensure!(fast == BigUint::from(naive), "{kind} n={n}: counter {fast}, naive {naive}");
        }
    }
    let jobs: Vec<(oracle::Quantity, usize)> = [
        ("G", 8),
        ("H", 8),
        ("M", 5),
        ("N", 5),
        ("P", 5),
        ("F", 5),
    ]
    .into_iter()
    .map(|(q, n)| (q.parse().unwrap(), n))
    .collect();
    for (q, n) in jobs {
        let runs: Vec<String> = [1, 4, 8]
            .into_iter()
            .map(|w| oracle::with_workers(w, || stripped(&oracle::compute(q, n, None).unwrap())))
            .collect();
        ensure!(runs.iter().all(|r| r == &runs[0]), "{q}({n}) differs across worker counts");
    }
    Ok("solver = naive cliques at n=4; counter = naive n<=6; 1/4/8 workers identical".into())
}

fn c9_reversing_exploration() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cache = Cache::open(dir.path().join("results.jsonl"));
    for n in 1..=5 {
        let r = max_family_exact(Reversing, n, Some(EXACT_BUDGET)).unwrap();
        ensure!(r.status == Status::Exact, "F({n}) not exact");
        let key = CacheKey::new("exact", n, json!({"quantity": "F"}));
        cache
            .append(key, serde_json::to_value(&r).unwrap())
            .map_err(|e| e.to_string())?;
    }
    let mut values = Vec::new();
    for n in 1..=5 {
        let key = CacheKey::new("exact", n, json!({"quantity": "F"}));
        let stored = cache.lookup(&key).ok_or(format!("F({n}) not persisted"))?;
        let r: ExactResult = serde_json::from_value(stored).map_err(|e| e.to_string())?;
        ensure!(BigUint::from(1u32) <= r.value && r.value <= factorial(n), "F({n}) = {} out of range", r.value);
        values.push(r.value);
    }
    ensure!(values.windows(2).all(|w| w[0] <= w[1]), "F not nondecreasing: {values:?}");
    let shown: Vec<String> = values.iter().map(ToString::to_string).collect();
    Ok(format!("F(1..5) = [{}], persisted and reloaded", shown.join(", ")))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("G(n) <= 5^n, n = 1..9; G(3) = 6", c1_quinary_count_bound),
        ("quinary codec injective, n = 1..8", c2_quinary_codec),
        ("H(n) <= 6^n, n = 1..9; parallel codec, n = 1..8", c3_parallel_count_and_codec),
        ("locally disjoint families: greedy, triple classes, exact M", c4_disjoint_packing),
        ("encapsulating block construction and inequality chain", c5_encapsulating_blocks),
        ("locally parallel families: greedy, triple classes, exact P", c6_parallel_packing),
        ("structural characterizations", c7_characterizations),
        ("oracle cross-validation", c8_cross_validation),
        ("reversing exploration F(1..5)", c9_reversing_exploration),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} [{secs:.1}s]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} [{secs:.1}s]: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
