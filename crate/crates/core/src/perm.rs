//! Permutations of `[n] = {1, …, n}` in one-line notation.
//!
//! A [`Permutation`] stores its images `σ(1), …, σ(n)`. Elements and
//! positions are both 1-based in every public API, so `position_of(a)` is
//! `σ⁻¹(a)`. Composition follows `(p ∘ q)(i) = p(q(i))`.
//!
//! The canonical enumeration order of `S_n` is lexicographic on the image
//! array; [`Permutation::rank`] and [`Permutation::unrank`] index that order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::factorial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("permutation must have at least one element")]
    Empty,
    #[error("image {image:?} is not a bijection of [1, {n}]")]
    NotABijection { image: Vec<usize>, n: usize },
    #[error("element {element} out of range [1, {n}]")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("rank {rank} out of range for n = {n} (must be below n!)")]
    RankOutOfRange { rank: BigUint, n: usize },
    #[error("cannot parse permutation literal {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// Validates that `image` is a bijection of `[1, n]` with `n = image.len()`.
    pub fn new(image: Vec<usize>) -> Result<Self, PermError> {
        let n = image.len();
        if n == 0 {
            return Err(PermError::Empty);
        }
        let mut seen = vec![false; n];
        for &v in &image {
            if v == 0 || v > n || seen[v - 1] {
                return Err(PermError::NotABijection { image, n });
            }
            seen[v - 1] = true;
        }
        Ok(Self { image })
    }

    pub(crate) fn from_image_unchecked(image: Vec<usize>) -> Self {
        debug_assert!(Self::new(image.clone()).is_ok());
        Self { image }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn into_image(self) -> Vec<usize> {
        self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// `σ(i)` for a 1-based position `i`.
    pub fn apply(&self, i: usize) -> Result<usize, PermError> {
        self.check_element(i)?;
        Ok(self.image[i - 1])
    }

    /// `σ⁻¹(a)`: the position at which element `a` sits.
    pub fn position_of(&self, a: usize) -> Result<usize, PermError> {
        self.check_element(a)?;
        Ok(self.image.iter().position(|&v| v == a).unwrap() + 1)
    }

    /// All positions at once: entry `a - 1` holds `σ⁻¹(a)`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.len()];
        for (i, &v) in self.image.iter().enumerate() {
            pos[v - 1] = i + 1;
        }
        pos
    }

    pub fn inverse(&self) -> Self {
        Self {
            image: self.positions(),
        }
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "composition needs equal sizes");
        Self {
            image: other.image.iter().map(|&j| self.image[j - 1]).collect(),
        }
    }

    fn check_element(&self, a: usize) -> Result<(), PermError> {
        if a == 0 || a > self.len() {
            Err(PermError::ElementOutOfRange {
                element: a,
                n: self.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn cycle_decomposition(&self) -> CycleStructure {
        let n = self.len();
        let mut visited = vec![false; n];
        let mut cycles = Vec::new();
        let mut fixed_points = Vec::new();
        // Scanning starts in increasing order, so each cycle begins at its
        // smallest vertex and cycles come out sorted by that vertex.
        for start in 1..=n {
            if visited[start - 1] {
                continue;
            }
            if self.image[start - 1] == start {
                visited[start - 1] = true;
                fixed_points.push(start);
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            while !visited[v - 1] {
                visited[v - 1] = true;
                cycle.push(v);
                v = self.image[v - 1];
            }
            cycles.push(cycle);
        }
        let spans = cycles
            .iter()
            .map(|c| (*c.iter().min().unwrap(), *c.iter().max().unwrap()))
            .collect();
        CycleStructure {
            n,
            cycles,
            fixed_points,
            spans,
        }
    }

    /// Lexicographic rank in `0..n!`.
    pub fn rank(&self) -> BigUint {
        let n = self.len();
        let mut r = BigUint::zero();
        for (i, &v) in self.image.iter().enumerate() {
            let smaller_later = self.image[i + 1..].iter().filter(|&&w| w < v).count();
            r = r * (n - i) as u64 + smaller_later as u64;
        }
        r
    }

    pub fn unrank(n: usize, rank: &BigUint) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::Empty);
        }
        if *rank >= factorial(n) {
            return Err(PermError::RankOutOfRange {
                rank: rank.clone(),
                n,
            });
        }
        // Lehmer digits, least significant (radix 1) last.
        let mut digits = vec![0usize; n];
        let mut r = rank.clone();
        for i in (0..n).rev() {
            let radix = BigUint::from((n - i) as u64);
            let (q, d) = r.div_rem(&radix);
            digits[i] = d.to_usize().unwrap();
            r = q;
        }
        let mut pool: Vec<usize> = (1..=n).collect();
        let image = digits.into_iter().map(|d| pool.remove(d)).collect();
        Ok(Self { image })
    }

    /// Lexicographic successor, or `None` for the last permutation.
    pub fn next_lex(&self) -> Option<Self> {
        let mut image = self.image.clone();
        next_lex_in_place(&mut image).then_some(Self { image })
    }

    /// Every permutation of `[n]` in lexicographic order.
    pub fn all(n: usize) -> LexOrder {
        LexOrder {
            current: (n > 0).then(|| (1..=n).collect()),
        }
    }
}

/// Steps `image` to its lexicographic successor; returns `false` (leaving the
/// slice untouched) when it is already the decreasing arrangement.
pub fn next_lex_in_place(image: &mut [usize]) -> bool {
    let n = image.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && image[i - 1] >= image[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while image[j] <= image[i - 1] {
        j -= 1;
    }
    image.swap(i - 1, j);
    image[i..].reverse();
    true
}

pub struct LexOrder {
    current: Option<Vec<usize>>,
}

impl Iterator for LexOrder {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let out = self.current.take()?;
        let mut succ = out.clone();
        if next_lex_in_place(&mut succ) {
            self.current = Some(succ);
        }
        Some(Permutation { image: out })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Parses the comma-separated literal `"3,4,1,2"`; surrounding brackets
    /// and whitespace are tolerated so JSON arrays paste in directly.
    fn from_str(s: &str) -> Result<Self, PermError> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let image = body
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PermError::Parse(s.to_string()))?;
        Self::new(image)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermError;

    fn try_from(image: Vec<usize>) -> Result<Self, PermError> {
        Self::new(image)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.image
    }
}

/// Disjoint-cycle form of a permutation's functional digraph `v → σ(v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleStructure {
    pub n: usize,
    /// Non-trivial cycles in traversal order, each starting at its smallest
    /// vertex, sorted by that vertex.
    pub cycles: Vec<Vec<usize>>,
    pub fixed_points: Vec<usize>,
    /// `(min, max)` of each cycle, parallel to `cycles`.
    pub spans: Vec<(usize, usize)>,
}

impl CycleStructure {
    pub fn rebuild(&self) -> Permutation {
        let mut image = vec![0; self.n];
        for &f in &self.fixed_points {
            image[f - 1] = f;
        }
        for cycle in &self.cycles {
            for (i, &v) in cycle.iter().enumerate() {
                image[v - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_image_unchecked(image)
    }
}
