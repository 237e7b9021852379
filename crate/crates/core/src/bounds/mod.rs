//! Exact evaluators for the bound formulas and the report type shared by
//! the verification harness.
//!
//! Factorial and power comparisons are done on big integers or rationals.
//! The only floating-point comparison is the entropy lower bound on the
//! binomial coefficient, which carries [`ENTROPY_REL_TOL`].

mod suite;

pub use suite::{verify_suite, Suite};

use std::time::Duration;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{binomial, factorial, pow};
use crate::families::ceil_ratio;

pub const ENTROPY_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("entropy argument {0} outside [0, 1]")]
    OutOfRange(f64),
    #[error("block count k = {k} must be ≥ 2 and divide n = {n}")]
    InvalidBlocks { n: usize, k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub left: String,
    pub comparator: String,
    pub right: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Informational value reported alongside the checks; never affects the
/// verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Observation {
    pub id: String,
    pub description: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub observations: Vec<Observation>,
    pub overall: Verdict,
}

impl BoundReport {
    pub fn new(suite: impl Into<String>, mut checks: Vec<Check>, mut observations: Vec<Observation>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        observations.sort_by(|a, b| a.id.cmp(&b.id));
        let overall = if checks.iter().all(|c| c.verdict == Verdict::Pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        BoundReport {
            suite: suite.into(),
            checks,
            observations,
            overall,
        }
    }

    pub fn passed(&self) -> bool {
        self.overall == Verdict::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict != Verdict::Pass)
    }

    /// Drops timings so repeated runs serialize identically.
    pub fn without_timings(mut self) -> Self {
        for c in &mut self.checks {
            c.elapsed_ms = None;
        }
        self
    }
}

pub(crate) fn check(
    id: impl Into<String>,
    description: impl Into<String>,
    left: impl ToString,
    comparator: &str,
    right: impl ToString,
    ok: bool,
    elapsed: Option<Duration>,
) -> Check {
    Check {
        id: id.into(),
        description: description.into(),
        left: left.to_string(),
        comparator: comparator.into(),
        right: right.to_string(),
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        elapsed_ms: elapsed.map(|d| d.as_millis() as u64),
    }
}

/// `h(t) = −t log₂ t − (1−t) log₂ (1−t)`, with `h(0) = h(1) = 0`.
pub fn binary_entropy(t: f64) -> Result<f64, BoundsError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(BoundsError::OutOfRange(t));
    }
    let term = |x: f64| if x == 0.0 { 0.0 } else { -x * x.log2() };
    Ok(term(t) + term(1.0 - t))
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn floor_div(num: BigUint, den: BigUint) -> BigUint {
    num / den
}

/// `(⌈n!/5ⁿ⌉, ⌊n!/6^⌊n/3⌋⌋)`: bounds on the largest locally disjoint family.
pub fn theorem1_bounds(n: usize) -> (BigUint, BigUint) {
    (
        ceil_ratio(&ratio(factorial(n), pow(5, n))),
        floor_div(factorial(n), pow(6, n / 3)),
    )
}

/// `(⌈n!/6ⁿ⌉, ⌊n!/6^⌊n/3⌋⌋)`: bounds on the largest locally parallel family.
pub fn theorem3_bounds(n: usize) -> (BigUint, BigUint) {
    (
        ceil_ratio(&ratio(factorial(n), pow(6, n))),
        floor_div(factorial(n), pow(6, n / 3)),
    )
}

fn block_len(n: usize, k: usize) -> Result<usize, BoundsError> {
    if k < 2 || n == 0 || !n.is_multiple_of(k) {
        Err(BoundsError::InvalidBlocks { n, k })
    } else {
        Ok(n / k)
    }
}

/// `((n/k)!)^(k−1) / k`, the size promised by the block construction.
pub fn theorem2_guarantee(n: usize, k: usize) -> Result<BigRational, BoundsError> {
    let m = block_len(n, k)?;
    Ok(ratio(num_traits::pow(factorial(m), k - 1), BigUint::from(k)))
}

/// The three displayed inequalities behind the block construction's size
/// estimate, each checked on its own:
///
/// 1. `((n/k)!)^k / n! ≥ k^(−n)` (exact);
/// 2. `C(n, n/k) ≥ 2^(n·h(1/k)) / (n+1)` (floating point, relative
///    tolerance [`ENTROPY_REL_TOL`]);
/// 3. `((n/k)!)^(k−1) / k ≥ (n − n/k)! · k^(−(n+1)) / (n+1)` (exact).
pub fn inequality_chain_check(n: usize, k: usize) -> Result<BoundReport, BoundsError> {
    let m = block_len(n, k)?;
    let tag = format!("chain/n={n:02}/k={k:02}");
    let mf = factorial(m);
    let nf = factorial(n);

    let lhs1 = ratio(num_traits::pow(mf.clone(), k), nf.clone());
    let rhs1 = ratio(1u32.into(), pow(k as u64, n));
    let c1 = check(
        format!("{tag}/1-multinomial"),
        "((n/k)!)^k / n! >= k^-n",
        &lhs1,
        ">=",
        &rhs1,
        lhs1 >= rhs1,
        None,
    );

    let binom = binomial(n, m);
    let h = binary_entropy(1.0 / k as f64)?;
    let rhs2 = (n as f64 * h).exp2() / (n + 1) as f64;
    let lhs2 = binom.to_f64().unwrap_or(f64::INFINITY);
    // Exact verdict first; a shortfall within the tolerance still passes.
    let ok2 = lhs2 >= rhs2 || (rhs2 - lhs2) <= ENTROPY_REL_TOL * rhs2;
    let c2 = check(
        format!("{tag}/2-entropy"),
        format!("C(n, n/k) >= 2^(n h(1/k)) / (n+1), relative tolerance {ENTROPY_REL_TOL:e}"),
        &binom,
        ">=",
        format!("{rhs2:.12e}"),
        ok2,
        None,
    );

    let lhs3 = ratio(num_traits::pow(mf, k - 1), BigUint::from(k));
    let rhs3 = ratio(factorial(n - m), pow(k as u64, n + 1) * BigUint::from(n + 1));
    let c3 = check(
        format!("{tag}/3-conclusion"),
        "((n/k)!)^(k-1) / k >= (n - n/k)! k^-(n+1) / (n+1)",
        &lhs3,
        ">=",
        &rhs3,
        lhs3 >= rhs3,
        None,
    );
    Ok(BoundReport::new(tag, vec![c1, c2, c3], Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let t: f64 = 1.0 / 3.0;
        let direct = -(t * t.ln() + (1.0 - t) * (1.0 - t).ln()) / std::f64::consts::LN_2;
        assert!((binary_entropy(t).unwrap() - direct).abs() < 1e-12);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn disjoint_bounds_examples() {
        assert_eq!(theorem1_bounds(3), (b(1), b(1)));
        assert_eq!(theorem1_bounds(6), (b(1), b(20)));
        assert_eq!(theorem1_bounds(9), (b(1), b(1680)));
    }

    #[test]
    fn parallel_bounds_examples() {
        assert_eq!(theorem3_bounds(3), (b(1), b(1)));
        assert_eq!(theorem3_bounds(6), (b(1), b(20)));
        assert_eq!(theorem3_bounds(4), (b(1), b(4)));
    }

    #[test]
    fn block_guarantee_examples() {
        assert_eq!(theorem2_guarantee(4, 2).unwrap().to_string(), "1");
        assert_eq!(theorem2_guarantee(9, 3).unwrap().to_string(), "12");
        assert_eq!(theorem2_guarantee(8, 2).unwrap().to_string(), "12");
        assert!(theorem2_guarantee(9, 2).is_err());
        assert!(theorem2_guarantee(9, 1).is_err());
    }

    #[test]
    fn chain_examples() {
        let r = inequality_chain_check(4, 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.checks[0].left, "1/6"); // 4/24
        assert_eq!(r.checks[0].right, "1/16");
        assert_eq!(r.checks[1].left, "6");
        assert!(r.checks[1].right.starts_with("3.2000"));
        let r = inequality_chain_check(12, 3).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(inequality_chain_check(12, 5).is_err());
    }

    #[test]
    fn disjoint_bounds_ordered_up_to_40() {
        for n in 1..=40 {
            let (lo, hi) = theorem1_bounds(n);
            assert!(lo <= hi, "n = {n}");
        }
    }
}
