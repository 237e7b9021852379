//! The four interlocking difference relations between two permutations of
//! the same ground set, each decided by searching for a certifying pair of
//! elements `(a, b)`.
//!
//! Every predicate scans ordered pairs `(a, b)` with `a ≠ b` in
//! lexicographic order and returns the first [`Witness`] found, so results
//! are deterministic. The position-array entry points
//! ([`find_on_positions`], [`related_on_positions`]) are the hot paths used
//! by the greedy scans and the exact oracles.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("permutations have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("unknown relation {0:?} (expected disjoint, encapsulating, parallel or reversing)")]
    UnknownRelation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Disjoint,
    Encapsulating,
    Parallel,
    Reversing,
}

impl RelationKind {
    pub const ALL: [RelationKind; 4] = [
        RelationKind::Disjoint,
        RelationKind::Encapsulating,
        RelationKind::Parallel,
        RelationKind::Reversing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Disjoint => "disjoint",
            RelationKind::Encapsulating => "encapsulating",
            RelationKind::Parallel => "parallel",
            RelationKind::Reversing => "reversing",
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationKind {
    type Err = RelationError;

    fn from_str(s: &str) -> Result<Self, RelationError> {
        RelationKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| RelationError::UnknownRelation(s.to_string()))
    }
}

/// How strictly one position interval must sit inside another for the
/// encapsulating relation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Containment {
    /// Both endpoints strictly inside: `[r, s] ⊂ [p, q]` with `p < r` and `s < q`.
    #[default]
    Strict,
    /// Plain containment of two unequal intervals.
    Weak,
}

/// The element pair `(a, b)` certifying a relation, with its four positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub a: usize,
    pub b: usize,
    /// `[σ⁻¹(a), σ⁻¹(b)]`
    pub pos_sigma: [usize; 2],
    /// `[τ⁻¹(a), τ⁻¹(b)]`
    pub pos_tau: [usize; 2],
}

impl Witness {
    fn from_positions(a: usize, b: usize, ps: &[usize], pt: &[usize]) -> Self {
        Witness {
            a,
            b,
            pos_sigma: [ps[a - 1], ps[b - 1]],
            pos_tau: [pt[a - 1], pt[b - 1]],
        }
    }

    /// Re-checks the witness against the two permutations: positions must
    /// agree with `position_of` and satisfy the defining inequalities of
    /// `kind`.
    pub fn validate(
        &self,
        kind: RelationKind,
        containment: Containment,
        sigma: &Permutation,
        tau: &Permutation,
    ) -> bool {
        let n = sigma.len();
        if tau.len() != n || self.a == self.b || self.a == 0 || self.b == 0 {
            return false;
        }
        if self.a > n || self.b > n {
            return false;
        }
        let consistent = sigma.position_of(self.a) == Ok(self.pos_sigma[0])
            && sigma.position_of(self.b) == Ok(self.pos_sigma[1])
            && tau.position_of(self.a) == Ok(self.pos_tau[0])
            && tau.position_of(self.b) == Ok(self.pos_tau[1]);
        consistent
            && pair_satisfies(
                kind,
                containment,
                self.pos_sigma[0],
                self.pos_sigma[1],
                self.pos_tau[0],
                self.pos_tau[1],
            )
    }
}

/// The defining inequalities on the four positions
/// `sa = σ⁻¹(a)`, `sb = σ⁻¹(b)`, `ta = τ⁻¹(a)`, `tb = τ⁻¹(b)`.
#[inline]
pub fn pair_satisfies(
    kind: RelationKind,
    containment: Containment,
    sa: usize,
    sb: usize,
    ta: usize,
    tb: usize,
) -> bool {
    match kind {
        RelationKind::Disjoint => (sa < sb && sb < ta && ta < tb) || (ta < tb && tb < sa && sa < sb),
        RelationKind::Encapsulating => {
            if sa >= sb || ta >= tb {
                return false;
            }
            match containment {
                Containment::Strict => (sa < ta && tb < sb) || (ta < sa && sb < tb),
                Containment::Weak => {
                    (sa, sb) != (ta, tb) && ((sa <= ta && tb <= sb) || (ta <= sa && sb <= tb))
                }
            }
        }
        // a before b in σ, b before a in τ, and [sa, sb] ∩ [tb, ta] = ∅.
        RelationKind::Parallel => sa < sb && tb < ta && (sb < tb || ta < sa),
        RelationKind::Reversing => sa == tb && sb == ta,
    }
}

/// Lexicographically first `(a, b)` witnessing `kind`, given position arrays
/// (`ps[a - 1] = σ⁻¹(a)`). Both arrays must have the same length.
pub fn find_on_positions(
    kind: RelationKind,
    containment: Containment,
    ps: &[usize],
    pt: &[usize],
) -> Option<(usize, usize)> {
    debug_assert_eq!(ps.len(), pt.len());
    let n = ps.len();
    for a in 0..n {
        let (sa, ta) = (ps[a], pt[a]);
        for b in 0..n {
            if a != b && pair_satisfies(kind, containment, sa, ps[b], ta, pt[b]) {
                return Some((a + 1, b + 1));
            }
        }
    }
    None
}

#[inline]
pub fn related_on_positions(kind: RelationKind, ps: &[usize], pt: &[usize]) -> bool {
    find_on_positions(kind, Containment::Strict, ps, pt).is_some()
}

pub fn find_witness(
    kind: RelationKind,
    containment: Containment,
    sigma: &Permutation,
    tau: &Permutation,
) -> Result<Option<Witness>, RelationError> {
    if sigma.len() != tau.len() {
        return Err(RelationError::SizeMismatch(sigma.len(), tau.len()));
    }
    let (ps, pt) = (sigma.positions(), tau.positions());
    Ok(find_on_positions(kind, containment, &ps, &pt)
        .map(|(a, b)| Witness::from_positions(a, b, &ps, &pt)))
}

/// Strict-containment relation check used everywhere outside sensitivity
/// experiments.
pub fn related(
    kind: RelationKind,
    sigma: &Permutation,
    tau: &Permutation,
) -> Result<Option<Witness>, RelationError> {
    find_witness(kind, Containment::Strict, sigma, tau)
}

/// `∃ a ≠ b: σ⁻¹(a) < σ⁻¹(b) < τ⁻¹(a) < τ⁻¹(b)`, or the same chain with
/// σ and τ exchanged.
pub fn locally_disjoint(sigma: &Permutation, tau: &Permutation) -> Result<Option<Witness>, RelationError> {
    related(RelationKind::Disjoint, sigma, tau)
}

/// `a` precedes `b` in both, and one position interval strictly contains
/// the other.
pub fn encapsulating(sigma: &Permutation, tau: &Permutation) -> Result<Option<Witness>, RelationError> {
    related(RelationKind::Encapsulating, sigma, tau)
}

pub fn encapsulating_with(
    sigma: &Permutation,
    tau: &Permutation,
    containment: Containment,
) -> Result<Option<Witness>, RelationError> {
    find_witness(RelationKind::Encapsulating, containment, sigma, tau)
}

/// Opposite precedence of `a` and `b`, with disjoint position intervals.
pub fn locally_parallel(sigma: &Permutation, tau: &Permutation) -> Result<Option<Witness>, RelationError> {
    related(RelationKind::Parallel, sigma, tau)
}

/// `a` and `b` occupy the same two positions with their roles exchanged.
pub fn reversing(sigma: &Permutation, tau: &Permutation) -> Result<Option<Witness>, RelationError> {
    related(RelationKind::Reversing, sigma, tau)
}

/// Sorts the entries inside each consecutive block of three positions
/// (a trailing block of one or two positions when `3 ∤ n`). Two
/// permutations share a class iff their canonical forms agree.
pub fn triple_class_canonical(p: &Permutation) -> Permutation {
    let mut image = p.image().to_vec();
    for block in image.chunks_mut(3) {
        block.sort_unstable();
    }
    Permutation::new(image).expect("sorting inside blocks keeps a bijection")
}
