//! Deliberately naive reference implementations. Nothing here calls into
//! the library's predicates, enumerators or searches.

#![allow(dead_code)]

use interlock::RelationKind;

/// All permutations of `[n]` by recursive insertion, sorted.
pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 1..=used.len() {
            if !used[v - 1] {
                used[v - 1] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v - 1] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out.sort();
    out
}

fn pos(p: &[usize], a: usize) -> usize {
    p.iter().position(|&x| x == a).unwrap() + 1
}

/// The defining inequalities for the ordered pair `(a, b)`, positions found
/// by linear search.
pub fn pair_related(kind: RelationKind, s: &[usize], t: &[usize], a: usize, b: usize) -> bool {
    let (sa, sb, ta, tb) = (pos(s, a), pos(s, b), pos(t, a), pos(t, b));
    match kind {
        RelationKind::Disjoint => (sa < sb && sb < ta && ta < tb) || (ta < tb && tb < sa && sa < sb),
        RelationKind::Encapsulating => sa < sb && ta < tb && ((sa < ta && tb < sb) || (ta < sa && sb < tb)),
        RelationKind::Parallel => sa < sb && tb < ta && (sb < tb || ta < sa),
        RelationKind::Reversing => sa == tb && sb == ta,
    }
}

/// Scans every ordered pair of distinct elements.
pub fn related(kind: RelationKind, s: &[usize], t: &[usize]) -> bool {
    let n = s.len();
    (1..=n).any(|a| (1..=n).any(|b| a != b && pair_related(kind, s, t, a, b)))
}

pub fn identity(n: usize) -> Vec<usize> {
    (1..=n).collect()
}

/// Permutations of `[n]` not related to the identity, identity included.
pub fn count_unrelated(kind: RelationKind, n: usize) -> u64 {
    let id = identity(n);
    all_perms(n).iter().filter(|p| !related(kind, &id, p)).count() as u64
}

/// Size of the largest pairwise related family, by listing every clique of
/// the relation graph (each clique extended only by larger indices).
pub fn max_family(kind: RelationKind, n: usize) -> usize {
    let perms = all_perms(n);
    let m = perms.len();
    let adj: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..m).map(|j| i != j && related(kind, &perms[i], &perms[j])).collect())
        .collect();
    fn extend(clique: &mut Vec<usize>, from: usize, adj: &[Vec<bool>], best: &mut usize, seen: &mut u64) {
        *seen += 1;
        *best = (*best).max(clique.len());
        for v in from..adj.len() {
            if clique.iter().all(|&u| adj[u][v]) {
                clique.push(v);
                extend(clique, v + 1, adj, best, seen);
                clique.pop();
            }
        }
    }
    let mut best = 0;
    let mut seen = 0;
    extend(&mut Vec::new(), 0, &adj, &mut best, &mut seen);
    best
}

pub fn pairwise_related(kind: RelationKind, family: &[Vec<usize>]) -> bool {
    family
        .iter()
        .enumerate()
        .all(|(i, s)| family[i + 1..].iter().all(|t| related(kind, s, t)))
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}
