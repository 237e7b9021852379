mod common;

use num_bigint::BigUint;

use interlock::families::greedy_family;
use interlock::oracle::{count_unrelated_to_identity, max_family_exact, neighborhood_size, Status};
use interlock::perm::Permutation;
use interlock::RelationKind;

#[test]
fn enumeration_matches_naive_generator() {
    for n in 1..=7 {
        let ours: Vec<Vec<usize>> = Permutation::all(n).map(|p| p.into_image()).collect();
        assert_eq!(ours, common::all_perms(n), "n = {n}");
    }
}

#[test]
fn counts_match_naive_counter() {
    for kind in [RelationKind::Disjoint, RelationKind::Parallel] {
        for n in 1..=6 {
            let fast = count_unrelated_to_identity(kind, n).unwrap().value;
            assert_eq!(fast, BigUint::from(common::count_unrelated(kind, n)), "{kind} n = {n}");
        }
    }
}

#[test]
fn small_counts() {
    let g: Vec<String> = (1..=5)
        .map(|n| count_unrelated_to_identity(RelationKind::Disjoint, n).unwrap().value.to_string())
        .collect();
    assert_eq!(g, ["1", "2", "6", "21", "79"]);
}

#[test]
fn clique_search_matches_naive_cliques() {
    for kind in RelationKind::ALL {
        for n in 1..=4 {
            let r = max_family_exact(kind, n, None).unwrap();
            assert_eq!(r.status, Status::Exact);
            assert_eq!(r.value, BigUint::from(common::max_family(kind, n)), "{kind} n = {n}");
            let fam: Vec<Vec<usize>> = r.witness_family.unwrap().into_iter().map(|p| p.into_image()).collect();
            assert!(common::pairwise_related(kind, &fam));
        }
    }
}

#[test]
fn neighbourhood_is_constant_at_4() {
    for kind in RelationKind::ALL {
        let sizes: Vec<u64> = Permutation::all(4).map(|s| neighborhood_size(kind, &s).unwrap()).collect();
        assert!(sizes.iter().all(|&v| v == sizes[0]), "{kind}: {sizes:?}");
        let id = common::identity(4);
        let naive = common::all_perms(4).iter().filter(|t| !common::related(kind, &id, t)).count() as u64;
        assert_eq!(sizes[0], naive);
    }
}

#[test]
fn greedy_families_are_maximal() {
    for kind in RelationKind::ALL {
        for n in 1..=6 {
            let fam: Vec<Vec<usize>> = greedy_family(kind, n)
                .unwrap()
                .members
                .into_iter()
                .map(|p| p.into_image())
                .collect();
            assert!(common::pairwise_related(kind, &fam), "{kind} n = {n}");
            for p in common::all_perms(n) {
                if fam.contains(&p) {
                    continue;
                }
                assert!(
                    fam.iter().any(|m| !common::related(kind, m, &p)),
                    "{kind} n = {n}: {p:?} could still be added"
                );
            }
        }
    }
}
