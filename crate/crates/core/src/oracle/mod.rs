//! Ground-truth engines: exact counts of permutations unrelated to a fixed
//! one, and exact maximum pairwise-related families.
//!
//! All four relations are invariant under relabelling both permutations by
//! a common `π` (`R(σ, τ) ⇔ R(π∘σ, π∘τ)`), so the relation graph on `S_n` is
//! vertex-transitive. Counters therefore only need the identity, and the
//! clique search may root every maximum family at the identity.

pub mod clique;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::factorial_u64;
use crate::perm::{next_lex_in_place, Permutation};
use crate::relations::{related_on_positions, RelationKind};
use clique::{max_clique, BitGraph, BitSet};

/// Largest `n` for the exhaustive counters.
pub const COUNT_LIMIT: usize = 10;
/// Largest `n` for the clique search.
pub const CLIQUE_LIMIT: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("n = {n} exceeds the {what} budget (n ≤ {limit})")]
    BudgetExceeded { what: &'static str, n: usize, limit: usize },
    #[error("n must be at least 1")]
    Empty,
    #[error("quantity {0} is not defined for relation {1}")]
    Unsupported(Quantity, RelationKind),
    #[error("unknown quantity {0:?}")]
    UnknownQuantity(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    /// Permutations not locally disjoint from the identity.
    G,
    /// Permutations not locally parallel to the identity.
    H,
    /// Largest pairwise locally disjoint family.
    M,
    /// Largest pairwise encapsulating family.
    N,
    /// Largest pairwise locally parallel family.
    P,
    /// Largest pairwise reversing family.
    F,
}

impl Quantity {
    pub fn relation(self) -> RelationKind {
        match self {
            Quantity::G | Quantity::M => RelationKind::Disjoint,
            Quantity::H | Quantity::P => RelationKind::Parallel,
            Quantity::N => RelationKind::Encapsulating,
            Quantity::F => RelationKind::Reversing,
        }
    }

    pub fn is_count(self) -> bool {
        matches!(self, Quantity::G | Quantity::H)
    }

    pub fn family_of(relation: RelationKind) -> Quantity {
        match relation {
            RelationKind::Disjoint => Quantity::M,
            RelationKind::Encapsulating => Quantity::N,
            RelationKind::Parallel => Quantity::P,
            RelationKind::Reversing => Quantity::F,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Quantity {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, OracleError> {
        Ok(match s {
            "G" => Quantity::G,
            "H" => Quantity::H,
            "M" => Quantity::M,
            "N" => Quantity::N,
            "P" => Quantity::P,
            "F" => Quantity::F,
            _ => return Err(OracleError::UnknownQuantity(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Exact,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactResult {
    pub quantity: Quantity,
    pub n: usize,
    #[serde(with = "decimal")]
    pub value: BigUint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_family: Option<Vec<Permutation>>,
    #[serde(rename = "elapsed_ms", with = "millis")]
    pub elapsed: Duration,
    pub status: Status,
}

pub(crate) mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

mod millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(v.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}

const CHUNK: u64 = 5040;

/// Number of `τ ∈ S_n` with `pred(τ⁻¹ positions)` true. Rank ranges of
/// `S_n` are split across workers and summed.
fn count_where(n: usize, pred: impl Fn(&[usize]) -> bool + Sync) -> u64 {
    let total = factorial_u64(n).expect("n within budget");
    let chunks = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let len = CHUNK.min(total - start);
            let mut image = Permutation::unrank(n, &BigUint::from(start))
                .expect("rank below n!")
                .into_image();
            let mut pos = vec![0; n];
            let mut hits = 0;
            for step in 0..len {
                for (i, &v) in image.iter().enumerate() {
                    pos[v - 1] = i + 1;
                }
                if pred(&pos) {
                    hits += 1;
                }
                if step + 1 < len {
                    next_lex_in_place(&mut image);
                }
            }
            hits
        })
        .sum()
}

fn check_count_budget(n: usize) -> Result<(), OracleError> {
    if n == 0 {
        return Err(OracleError::Empty);
    }
    if n > COUNT_LIMIT {
        return Err(OracleError::BudgetExceeded {
            what: "enumeration",
            n,
            limit: COUNT_LIMIT,
        });
    }
    Ok(())
}

/// Exact number of permutations of `[n]` *not* related to the identity,
/// the identity itself included: `G(n)` for the disjoint relation, `H(n)`
/// for the parallel one.
pub fn count_unrelated_to_identity(relation: RelationKind, n: usize) -> Result<ExactResult, OracleError> {
    let quantity = match relation {
        RelationKind::Disjoint => Quantity::G,
        RelationKind::Parallel => Quantity::H,
        other => return Err(OracleError::Unsupported(Quantity::G, other)),
    };
    check_count_budget(n)?;
    let started = Instant::now();
    let identity: Vec<usize> = (1..=n).collect();
    let value = count_where(n, |pos| !related_on_positions(relation, &identity, pos));
    Ok(ExactResult {
        quantity,
        n,
        value: value.into(),
        witness_family: None,
        elapsed: started.elapsed(),
        status: Status::Exact,
    })
}

/// Number of permutations not related to `sigma`, `sigma` included.
pub fn neighborhood_size(relation: RelationKind, sigma: &Permutation) -> Result<u64, OracleError> {
    let n = sigma.len();
    check_count_budget(n)?;
    let ps = sigma.positions();
    Ok(count_where(n, |pos| !related_on_positions(relation, &ps, pos)))
}

/// Exact size of the largest pairwise related family in `S_n`, with one
/// witness family. The search stops at `budget` and reports its incumbent
/// as [`Status::BudgetExhausted`].
pub fn max_family_exact(
    relation: RelationKind,
    n: usize,
    budget: Option<Duration>,
) -> Result<ExactResult, OracleError> {
    if n == 0 {
        return Err(OracleError::Empty);
    }
    if n > CLIQUE_LIMIT {
        return Err(OracleError::BudgetExceeded {
            what: "clique",
            n,
            limit: CLIQUE_LIMIT,
        });
    }
    let started = Instant::now();
    let deadline = budget.map(|b| started + b);
    let identity: Vec<usize> = (1..=n).collect();

    // Root at the identity: only its neighbours can join.
    let vertices: Vec<Permutation> = Permutation::all(n)
        .filter(|p| related_on_positions(relation, &identity, &p.positions()))
        .collect();
    let positions: Vec<Vec<usize>> = vertices.iter().map(Permutation::positions).collect();
    let rows: Vec<BitSet> = (0..vertices.len())
        .into_par_iter()
        .map(|u| {
            let mut row = BitSet::new(vertices.len());
            for v in 0..vertices.len() {
                if u != v && related_on_positions(relation, &positions[u], &positions[v]) {
                    row.insert(v);
                }
            }
            row
        })
        .collect();
    let outcome = max_clique(&BitGraph::from_rows(rows), deadline);

    let mut family: Vec<Permutation> = std::iter::once(Permutation::identity(n))
        .chain(outcome.clique.iter().map(|&v| vertices[v].clone()))
        .collect();
    family.sort();
    Ok(ExactResult {
        quantity: Quantity::family_of(relation),
        n,
        value: family.len().into(),
        witness_family: Some(family),
        elapsed: started.elapsed(),
        status: if outcome.complete {
            Status::Exact
        } else {
            Status::BudgetExhausted
        },
    })
}

/// Dispatches a quantity to its counter or clique search.
pub fn compute(quantity: Quantity, n: usize, budget: Option<Duration>) -> Result<ExactResult, OracleError> {
    if quantity.is_count() {
        count_unrelated_to_identity(quantity.relation(), n)
    } else {
        max_family_exact(quantity.relation(), n, budget)
    }
}
