//! Functional-digraph view of a permutation: one directed edge `v → σ(v)`
//! per vertex, tagged by direction.
//!
//! Two same-direction edges *interleave* when their spans overlap without
//! either containing the other (`c1 < c2 < d1 < d2`). A permutation is
//! locally disjoint from the identity exactly when its graph has an
//! interleaved pair; without one, every cycle splits into one increasing and
//! one decreasing run and the cycle spans nest. The quinary codec relies on
//! both facts.

use serde::Serialize;
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("{cycle:?} is not a cycle of length ≥ 2 of {perm}")]
    NotACycle { cycle: Vec<usize>, perm: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Increasing,
    Decreasing,
    Loop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn new(tail: usize, head: usize) -> Self {
        let kind = match tail.cmp(&head) {
            std::cmp::Ordering::Less => EdgeKind::Increasing,
            std::cmp::Ordering::Greater => EdgeKind::Decreasing,
            std::cmp::Ordering::Equal => EdgeKind::Loop,
        };
        Edge { tail, head, kind }
    }

    /// Closed interval `[min, max]` of the endpoints.
    pub fn span(&self) -> (usize, usize) {
        (self.tail.min(self.head), self.tail.max(self.head))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionalGraph {
    pub n: usize,
    /// `edges[v - 1]` is the edge leaving `v`.
    pub edges: Vec<Edge>,
}

pub fn functional_graph(p: &Permutation) -> FunctionalGraph {
    FunctionalGraph {
        n: p.len(),
        edges: p
            .image()
            .iter()
            .enumerate()
            .map(|(i, &v)| Edge::new(i + 1, v))
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A maximal monotone path along a cycle, given by its vertices in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotoneRun {
    pub vertices: Vec<usize>,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunDecomposition {
    pub runs: Vec<MonotoneRun>,
    pub is_simple: bool,
}

/// Splits a cycle of `p` into maximal increasing and decreasing runs. The
/// cycle may be given in any rotation; runs are reported starting from its
/// smallest vertex, so the first run is always increasing.
pub fn monotone_runs(p: &Permutation, cycle: &[usize]) -> Result<RunDecomposition, StructureError> {
    let not_a_cycle = || StructureError::NotACycle {
        cycle: cycle.to_vec(),
        perm: p.to_string(),
    };
    let n = p.len();
    if cycle.len() < 2 || cycle.iter().any(|&v| v == 0 || v > n) {
        return Err(not_a_cycle());
    }
    let len = cycle.len();
    let closes = (0..len).all(|i| p.image()[cycle[i] - 1] == cycle[(i + 1) % len]);
    if !closes {
        return Err(not_a_cycle());
    }
    let start = (0..len).min_by_key(|&i| cycle[i]).unwrap();
    let walk: Vec<usize> = (0..=len).map(|i| cycle[(start + i) % len]).collect();

    let mut runs: Vec<MonotoneRun> = Vec::new();
    for step in walk.windows(2) {
        let direction = if step[0] < step[1] {
            Direction::Increasing
        } else {
            Direction::Decreasing
        };
        match runs.last_mut() {
            Some(run) if run.direction == direction => run.vertices.push(step[1]),
            _ => runs.push(MonotoneRun {
                vertices: vec![step[0], step[1]],
                direction,
            }),
        }
    }
    let is_simple = runs.len() == 2;
    Ok(RunDecomposition { runs, is_simple })
}

fn interleaved(e: &Edge, f: &Edge) -> bool {
    let ((c1, d1), (c2, d2)) = (e.span(), f.span());
    (c1 < c2 && c2 < d1 && d1 < d2) || (c2 < c1 && c1 < d2 && d2 < d1)
}

/// First pair of same-direction edges (ordered by tail) whose spans
/// interleave, if any.
pub fn interleaved_pair(p: &Permutation) -> Option<(Edge, Edge)> {
    let edges: Vec<Edge> = functional_graph(p)
        .edges
        .into_iter()
        .filter(|e| e.kind != EdgeKind::Loop)
        .collect();
    for (i, e) in edges.iter().enumerate() {
        for f in &edges[i + 1..] {
            if e.kind == f.kind && interleaved(e, f) {
                return Some((*e, *f));
            }
        }
    }
    None
}

/// Cycle spans form a laminar family, and no vertex of an enclosing cycle
/// sits strictly inside the span of a cycle nested in it.
pub fn spans_laminar(p: &Permutation) -> bool {
    let cs = p.cycle_decomposition();
    for (i, &(l1, r1)) in cs.spans.iter().enumerate() {
        for (j, &(l2, r2)) in cs.spans.iter().enumerate() {
            if i == j {
                continue;
            }
            let disjoint = r1 < l2 || r2 < l1;
            if disjoint {
                continue;
            }
            // Check from the viewpoint "j nested inside i".
            let nested = l1 < l2 && r2 < r1;
            let contains_other = l2 < l1 && r1 < r2;
            if !nested && !contains_other {
                return false;
            }
            if nested && cs.cycles[i].iter().any(|&v| l2 < v && v < r2) {
                return false;
            }
        }
    }
    true
}

/// Among same-direction edges, the one with the earlier tail also has the
/// earlier head. This is exactly the absence of a locally parallel pair with
/// the identity: a head-order inversion between two same-direction edges
/// always leaves their tail and head intervals disjoint.
pub fn edges_order_preserving(p: &Permutation) -> bool {
    let g = functional_graph(p);
    [EdgeKind::Increasing, EdgeKind::Decreasing].into_iter().all(|kind| {
        // edges come out sorted by tail
        let heads: Vec<usize> = g.edges.iter().filter(|e| e.kind == kind).map(|e| e.head).collect();
        heads.windows(2).all(|w| w[0] < w[1])
    })
}
