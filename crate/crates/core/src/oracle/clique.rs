//! Exact maximum clique by branch and bound over bitset adjacency.
//!
//! Candidates are greedily coloured at every node; a vertex whose colour
//! class cannot lift the current clique above the incumbent is pruned
//! together with everything coloured before it. Vertices are renumbered in
//! degeneracy order (densest core first) so the colouring sees them in that
//! order.
//!
//! The root's branches run in parallel and share a monotone incumbent size.
//! Once the optimum is known, a sequential pass with the optimum as target
//! recovers the witness, so the returned clique does not depend on the
//! number of workers.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    fn difference_in_place(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

/// Undirected graph with bitset rows.
pub struct BitGraph {
    rows: Vec<BitSet>,
}

impl BitGraph {
    pub fn from_rows(rows: Vec<BitSet>) -> Self {
        BitGraph { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    /// Smallest-last order, reversed: the last vertex removed comes first.
    fn degeneracy_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut degree: Vec<usize> = self.rows.iter().map(BitSet::count).collect();
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (degree[v], v))
                .unwrap();
            removed[v] = true;
            order.push(v);
            for u in self.rows[v].iter() {
                if !removed[u] {
                    degree[u] -= 1;
                }
            }
        }
        order.reverse();
        order
    }

    fn relabel(&self, order: &[usize]) -> BitGraph {
        let n = self.len();
        let mut new_index = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let rows = order
            .iter()
            .map(|&old| {
                let mut row = BitSet::new(n);
                for u in self.rows[old].iter() {
                    row.insert(new_index[u]);
                }
                row
            })
            .collect();
        BitGraph { rows }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueOutcome {
    /// Vertex indices of the best clique found, sorted ascending.
    pub clique: Vec<usize>,
    /// True iff the search ran to completion, so `clique` is maximum.
    pub complete: bool,
}

struct Search<'a> {
    graph: &'a BitGraph,
    best_size: &'a AtomicUsize,
    best: &'a Mutex<Vec<usize>>,
    stop: &'a AtomicBool,
    deadline: Option<Instant>,
    /// Stop as soon as a clique of this size is found.
    target: Option<usize>,
    nodes: u64,
}

impl Search<'_> {
    fn colour(&self, candidates: &BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut uncoloured = candidates.clone();
        let mut order = Vec::with_capacity(candidates.count());
        let mut colours = Vec::with_capacity(order.capacity());
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut class = uncoloured.clone();
            while let Some(v) = class.first() {
                uncoloured.remove(v);
                class.remove(v);
                class.difference_in_place(&self.graph.rows[v]);
                order.push(v);
                colours.push(colour);
            }
        }
        (order, colours)
    }

    fn out_of_time(&mut self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return true;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.stop.store(true, Ordering::Relaxed);
                    return true;
                }
            }
        }
        false
    }

    fn offer(&self, clique: &[usize]) {
        let mut best = self.best.lock().unwrap();
        if clique.len() > best.len() {
            *best = clique.to_vec();
            self.best_size.fetch_max(clique.len(), Ordering::SeqCst);
            if self.target.is_some_and(|t| clique.len() >= t) {
                self.stop.store(true, Ordering::SeqCst);
            }
        }
    }

    fn expand(&mut self, clique: &mut Vec<usize>, mut candidates: BitSet) {
        if self.out_of_time() {
            return;
        }
        let (order, colours) = self.colour(&candidates);
        for i in (0..order.len()).rev() {
            if clique.len() + colours[i] <= self.best_size.load(Ordering::Relaxed) {
                return;
            }
            if self.stop.load(Ordering::Relaxed) {
                return;
            }
            let v = order[i];
            clique.push(v);
            let next = candidates.intersection(&self.graph.rows[v]);
            if next.is_empty() {
                if clique.len() > self.best_size.load(Ordering::Relaxed) {
                    self.offer(clique);
                }
            } else {
                self.expand(clique, next);
            }
            clique.pop();
            candidates.remove(v);
        }
    }
}

fn greedy_clique(graph: &BitGraph) -> Vec<usize> {
    let mut clique = Vec::new();
    let mut candidates = BitSet::full(graph.len());
    while let Some(v) = candidates.first() {
        clique.push(v);
        candidates = candidates.intersection(&graph.rows[v]);
    }
    clique
}

fn search_root(
    graph: &BitGraph,
    seed: Vec<usize>,
    deadline: Option<Instant>,
    target: Option<usize>,
    parallel: bool,
) -> (Vec<usize>, bool) {
    let best_size = AtomicUsize::new(seed.len());
    let best = Mutex::new(seed);
    let stop = AtomicBool::new(false);
    let make = || Search {
        graph,
        best_size: &best_size,
        best: &best,
        stop: &stop,
        deadline,
        target,
        nodes: 0,
    };
    let root = make();
    let (order, colours) = root.colour(&BitSet::full(graph.len()));
    let branch = |i: usize| {
        let mut s = make();
        if colours[i] < s.best_size.load(Ordering::Relaxed) || s.stop.load(Ordering::Relaxed) {
            return;
        }
        let v = order[i];
        let mut earlier = BitSet::new(graph.len());
        for &u in &order[..i] {
            earlier.insert(u);
        }
        let mut clique = vec![v];
        let next = earlier.intersection(&graph.rows[v]);
        if next.is_empty() {
            s.offer(&clique);
        } else {
            s.expand(&mut clique, next);
        }
    };
    if parallel {
        (0..order.len()).into_par_iter().rev().for_each(branch);
    } else {
        (0..order.len()).rev().for_each(branch);
    }
    let found = best.into_inner().unwrap();
    let reached_target = target.is_some_and(|t| found.len() >= t);
    let complete = reached_target || !stop.load(Ordering::SeqCst);
    (found, complete)
}

/// Maximum clique of `graph`. With a deadline, an interrupted search
/// returns its incumbent with `complete = false`.
pub fn max_clique(graph: &BitGraph, deadline: Option<Instant>) -> CliqueOutcome {
    if graph.is_empty() {
        return CliqueOutcome {
            clique: Vec::new(),
            complete: true,
        };
    }
    let order = graph.degeneracy_order();
    let g = graph.relabel(&order);
    let seed = greedy_clique(&g);
    let to_original = |c: Vec<usize>| {
        let mut c: Vec<usize> = c.into_iter().map(|v| order[v]).collect();
        c.sort_unstable();
        c
    };

    let (incumbent, complete) = search_root(&g, seed.clone(), deadline, None, true);
    if !complete {
        return CliqueOutcome {
            clique: to_original(incumbent),
            complete: false,
        };
    }
    let omega = incumbent.len();
    // Sequential pass seeded just below the optimum: the first optimum
    // clique in branch order is the witness.
    let below: Vec<usize> = seed.into_iter().take(omega - 1).collect();
    let (witness, found) = search_root(&g, below, deadline, Some(omega), false);
    let clique = if found && witness.len() == omega {
        witness
    } else {
        // deadline hit while re-deriving; the phase-one clique is still optimal
        incumbent
    };
    CliqueOutcome {
        clique: to_original(clique),
        complete: true,
    }
}
