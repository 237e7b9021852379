//! Constructive families of permutations.
//!
//! * [`greedy_family`]: lexicographic greedy packing of pairwise related
//!   permutations. Each admission eliminates at most the neighbourhood of the
//!   admitted member, which yields the `n!/5ⁿ` and `n!/6ⁿ` guarantees for the
//!   disjoint and parallel relations.
//! * [`triple_block_family`]: permutations acting inside consecutive value
//!   triples; no two members are locally disjoint or locally parallel.
//! * [`block_invariant_family`] and [`encapsulating_construction`]: the set
//!   of permutations preserving `k` consecutive blocks, and a greedy subset
//!   whose members differ on at least two blocks, hence pairwise
//!   encapsulate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{factorial, factorial_u64, pow};
use crate::perm::Permutation;
use crate::relations::{self, related_on_positions, RelationKind, Witness};

/// Largest `n` for which a full scan of `S_n` is attempted.
pub const ENUMERATION_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("n = {n} exceeds the enumeration budget (n ≤ {limit})")]
    TooLarge { n: usize, limit: usize },
    #[error("n must be at least 1")]
    Empty,
    #[error("block count k = {k} must be ≥ 2 and divide n = {n}")]
    InvalidBlocks { n: usize, k: usize },
    #[error("members {0} and {1} fail the family's pairwise property")]
    VerificationFailed(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Greedy,
    TripleBlock,
    BlockInvariant,
    BlockGreedy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    /// Relation the members satisfy pairwise, or the construction tag for
    /// families without one.
    pub relation: String,
    pub construction: Construction,
    pub n: usize,
    pub params: FamilyParams,
    pub size: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub guarantee: Option<BigRational>,
    pub members: Vec<Permutation>,
}

fn ser_ratio<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

fn ratio(num: num_bigint::BigUint, den: num_bigint::BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `⌈q⌉` for a non-negative rational.
pub fn ceil_ratio(q: &BigRational) -> num_bigint::BigUint {
    q.ceil().to_integer().to_biguint().expect("non-negative")
}

type PairCheck = dyn Fn(&[usize], &[usize]) -> bool + Sync;

impl FamilyReport {
    /// Size meets `⌈guarantee⌉` (vacuous without a guarantee).
    pub fn meets_guarantee(&self) -> bool {
        match &self.guarantee {
            Some(g) => num_bigint::BigUint::from(self.size) >= ceil_ratio(g),
            None => true,
        }
    }

    /// Re-checks the pairwise property of the construction over all member
    /// pairs. Returns the first failing pair in lexicographic index order.
    pub fn verify(&self) -> Result<(), FamilyError> {
        let check: Box<PairCheck> = match self.construction {
            Construction::BlockInvariant => return Ok(()),
            Construction::TripleBlock => Box::new(|ps, pt| {
                !related_on_positions(RelationKind::Disjoint, ps, pt)
                    && !related_on_positions(RelationKind::Parallel, ps, pt)
            }),
            Construction::Greedy | Construction::BlockGreedy => {
                let kind: RelationKind = self.relation.parse().expect("relation-tagged family");
                Box::new(move |ps, pt| related_on_positions(kind, ps, pt))
            }
        };
        let pos: Vec<Vec<usize>> = self.members.iter().map(Permutation::positions).collect();
        let failure = (0..pos.len())
            .into_par_iter()
            .filter_map(|i| {
                (i + 1..pos.len())
                    .find(|&j| !check(&pos[i], &pos[j]))
                    .map(|j| (i, j))
            })
            .min();
        match failure {
            Some((i, j)) => Err(FamilyError::VerificationFailed(i, j)),
            None => Ok(()),
        }
    }
}

/// Greedy size guarantee `n!/cⁿ`, with `c = 5` for the disjoint and `c = 6`
/// for the parallel relation; no guarantee is claimed for the others.
pub fn greedy_guarantee(relation: RelationKind, n: usize) -> Option<BigRational> {
    let base = match relation {
        RelationKind::Disjoint => 5,
        RelationKind::Parallel => 6,
        _ => return None,
    };
    Some(ratio(factorial(n), pow(base, n)))
}

/// Scans `S_n` in lexicographic order, admitting a permutation iff it is
/// related to every member admitted before it.
pub fn greedy_family(relation: RelationKind, n: usize) -> Result<FamilyReport, FamilyError> {
    if n == 0 {
        return Err(FamilyError::Empty);
    }
    if n > ENUMERATION_LIMIT {
        return Err(FamilyError::TooLarge {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut admitted: Vec<Vec<usize>> = Vec::new();
    let mut members = Vec::new();
    for candidate in Permutation::all(n) {
        let pos = candidate.positions();
        if admitted.iter().all(|m| related_on_positions(relation, m, &pos)) {
            admitted.push(pos);
            members.push(candidate);
        }
    }
    Ok(FamilyReport {
        relation: relation.name().to_string(),
        construction: Construction::Greedy,
        n,
        params: FamilyParams { k: None },
        size: members.len(),
        guarantee: greedy_guarantee(relation, n),
        members,
    })
}

/// All permutations mapping each block of `block_len` consecutive positions
/// onto its own values, in lexicographic order. Positions past the last full
/// block stay fixed.
fn block_permutations(n: usize, block_len: usize) -> Vec<Permutation> {
    let blocks = n / block_len;
    let local: Vec<Vec<usize>> = Permutation::all(block_len).map(Permutation::into_image).collect();
    let mut out = Vec::with_capacity(local.len().pow(blocks as u32));
    let mut digits = vec![0usize; blocks];
    loop {
        let mut image: Vec<usize> = (1..=n).collect();
        for (b, &d) in digits.iter().enumerate() {
            for (i, &v) in local[d].iter().enumerate() {
                image[b * block_len + i] = b * block_len + v;
            }
        }
        out.push(Permutation::from_image_unchecked(image));
        // odometer, last block least significant
        let mut b = blocks;
        loop {
            if b == 0 {
                return out;
            }
            b -= 1;
            digits[b] += 1;
            if digits[b] < local.len() {
                break;
            }
            digits[b] = 0;
        }
    }
}

fn check_block_budget(n: usize, size: u64) -> Result<(), FamilyError> {
    let budget = factorial_u64(ENUMERATION_LIMIT).unwrap();
    if size > budget {
        Err(FamilyError::TooLarge {
            n,
            limit: ENUMERATION_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// Permutations fixing each value triple `{1,2,3}, {4,5,6}, …` setwise, the
/// one or two trailing values fixed pointwise. Size `6^⌊n/3⌋`.
pub fn triple_block_family(n: usize) -> Result<FamilyReport, FamilyError> {
    if n == 0 {
        return Err(FamilyError::Empty);
    }
    let expected = pow(6, n / 3);
    check_block_budget(n, expected.to_u64().unwrap_or(u64::MAX))?;
    let members = if n < 3 {
        vec![Permutation::identity(n)]
    } else {
        block_permutations(n, 3)
    };
    Ok(FamilyReport {
        relation: "triple-block".into(),
        construction: Construction::TripleBlock,
        n,
        params: FamilyParams { k: None },
        size: members.len(),
        guarantee: Some(ratio(expected, 1u32.into())),
        members,
    })
}

fn check_blocks(n: usize, k: usize) -> Result<usize, FamilyError> {
    if n == 0 {
        return Err(FamilyError::Empty);
    }
    if k < 2 || !n.is_multiple_of(k) {
        return Err(FamilyError::InvalidBlocks { n, k });
    }
    Ok(n / k)
}

/// `((n/k)!)^k`: the number of permutations preserving `k` equal blocks.
pub fn block_invariant_size(n: usize, k: usize) -> Result<num_bigint::BigUint, FamilyError> {
    let m = check_blocks(n, k)?;
    Ok(num_traits::pow(factorial(m), k))
}

/// The set `Q` of permutations mapping each of the `k` consecutive intervals
/// of length `n/k` onto itself.
pub fn block_invariant_family(n: usize, k: usize) -> Result<FamilyReport, FamilyError> {
    let m = check_blocks(n, k)?;
    let size = block_invariant_size(n, k)?;
    check_block_budget(n, size.to_u64().unwrap_or(u64::MAX))?;
    let members = block_permutations(n, m);
    Ok(FamilyReport {
        relation: "block-invariant".into(),
        construction: Construction::BlockInvariant,
        n,
        params: FamilyParams { k: Some(k) },
        size: members.len(),
        guarantee: Some(ratio(size, 1u32.into())),
        members,
    })
}

/// `((n/k)!)^(k−1) / k`.
pub fn encapsulating_guarantee(n: usize, k: usize) -> Result<BigRational, FamilyError> {
    let m = check_blocks(n, k)?;
    Ok(ratio(num_traits::pow(factorial(m), k - 1), (k as u64).into()))
}

fn differing_blocks(a: &[usize], b: &[usize], block_len: usize) -> usize {
    a.chunks(block_len)
        .zip(b.chunks(block_len))
        .filter(|(x, y)| x != y)
        .count()
}

/// Greedy scan of the block-invariant set `Q`, admitting a permutation iff
/// it differs from every admitted member on at least two blocks. The result
/// is re-verified to be pairwise encapsulating.
pub fn encapsulating_construction(n: usize, k: usize) -> Result<FamilyReport, FamilyError> {
    let m = check_blocks(n, k)?;
    let q = block_invariant_family(n, k)?;
    let mut members: Vec<Permutation> = Vec::new();
    for candidate in q.members {
        if members
            .iter()
            .all(|mem| differing_blocks(mem.image(), candidate.image(), m) >= 2)
        {
            members.push(candidate);
        }
    }
    let report = FamilyReport {
        relation: RelationKind::Encapsulating.name().into(),
        construction: Construction::BlockGreedy,
        n,
        params: FamilyParams { k: Some(k) },
        size: members.len(),
        guarantee: Some(encapsulating_guarantee(n, k)?),
        members,
    };
    report.verify()?;
    Ok(report)
}

/// The two-block encapsulation witness for block-invariant `σ`, `τ` that
/// differ on at least two of the `k` blocks: an element `a` of the first
/// differing block placed strictly earlier in `σ` than in `τ`, and an element
/// `b` of a later differing block placed strictly later in `σ`. Then
/// `[σ⁻¹(a), σ⁻¹(b)]` strictly contains `[τ⁻¹(a), τ⁻¹(b)]`.
pub fn block_witness(sigma: &Permutation, tau: &Permutation, k: usize) -> Option<Witness> {
    let n = sigma.len();
    if tau.len() != n || k < 2 || !n.is_multiple_of(k) {
        return None;
    }
    let m = n / k;
    let (ps, pt) = (sigma.positions(), tau.positions());
    let diff: Vec<usize> = (0..k)
        .filter(|&b| sigma.image()[b * m..(b + 1) * m] != tau.image()[b * m..(b + 1) * m])
        .collect();
    if diff.len() < 2 {
        return None;
    }
    let values = |blk: usize| (blk * m + 1)..=((blk + 1) * m);
    let a = values(diff[0]).find(|&v| ps[v - 1] < pt[v - 1])?;
    let b = values(diff[1]).find(|&v| ps[v - 1] > pt[v - 1])?;
    Some(Witness {
        a,
        b,
        pos_sigma: [ps[a - 1], ps[b - 1]],
        pos_tau: [pt[a - 1], pt[b - 1]],
    })
}

/// Relation check used for greedy maximality tests and reports.
pub fn is_related(relation: RelationKind, sigma: &Permutation, tau: &Permutation) -> bool {
    relations::related(relation, sigma, tau)
        .expect("family members share n")
        .is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::Containment;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn greedy_small_cases() {
        let g = greedy_family(RelationKind::Disjoint, 3).unwrap();
        assert_eq!(g.members, vec![p("1,2,3")]);
        assert_eq!(greedy_family(RelationKind::Parallel, 3).unwrap().size, 1);
        assert_eq!(
            greedy_family(RelationKind::Disjoint, 11),
            Err(FamilyError::TooLarge { n: 11, limit: 10 })
        );
        assert_eq!(greedy_family(RelationKind::Disjoint, 0), Err(FamilyError::Empty));
    }

    #[test]
    fn triple_block_sizes() {
        let t3 = triple_block_family(3).unwrap();
        assert_eq!(t3.members, Permutation::all(3).collect::<Vec<_>>());
        let t4 = triple_block_family(4).unwrap();
        assert_eq!(t4.size, 6);
        assert!(t4.members.iter().all(|m| m.image()[3] == 4));
        assert_eq!(triple_block_family(6).unwrap().size, 36);
        assert_eq!(triple_block_family(2).unwrap().size, 1);
        assert_eq!(triple_block_family(8).unwrap().size, 36);
    }

    #[test]
    fn block_invariant_examples() {
        let q = block_invariant_family(4, 2).unwrap();
        assert_eq!(
            q.members,
            vec![p("1,2,3,4"), p("1,2,4,3"), p("2,1,3,4"), p("2,1,4,3")]
        );
        assert_eq!(block_invariant_family(6, 3).unwrap().size, 8);
        assert_eq!(block_invariant_family(6, 2).unwrap().size, 36);
        assert_eq!(
            block_invariant_family(6, 4),
            Err(FamilyError::InvalidBlocks { n: 6, k: 4 })
        );
        assert!(block_invariant_family(6, 1).is_err());
    }

    #[test]
    fn encapsulating_construction_examples() {
        let c = encapsulating_construction(4, 2).unwrap();
        assert_eq!(c.members, vec![p("1,2,3,4"), p("2,1,4,3")]);
        let w = relations::encapsulating(&c.members[0], &c.members[1]).unwrap().unwrap();
        assert_eq!((w.a, w.b), (1, 4));
        assert!(c.meets_guarantee());

        let c = encapsulating_construction(6, 3).unwrap();
        assert!(c.size >= 2 && c.meets_guarantee());
        let c = encapsulating_construction(9, 3).unwrap();
        assert!(c.size >= 12 && c.meets_guarantee());
        assert!(encapsulating_construction(9, 2).is_err());
    }

    #[test]
    fn guarantees_are_exact_rationals() {
        let g = greedy_guarantee(RelationKind::Disjoint, 9).unwrap();
        assert_eq!(g.to_string(), "72576/390625"); // 9!/5^9 reduced
        assert_eq!(encapsulating_guarantee(9, 3).unwrap().to_string(), "12");
        assert_eq!(encapsulating_guarantee(4, 2).unwrap().to_string(), "1");
        assert!(greedy_guarantee(RelationKind::Reversing, 5).is_none());
    }

    #[test]
    fn block_witness_is_strict_encapsulation() {
        let q = block_invariant_family(6, 3).unwrap().members;
        for s in &q {
            for t in &q {
                let diff = differing_blocks(s.image(), t.image(), 2);
                let w = block_witness(s, t, 3);
                assert_eq!(w.is_some(), diff >= 2);
                if let Some(w) = w {
                    assert!(w.validate(RelationKind::Encapsulating, Containment::Strict, s, t));
                    assert!(w.pos_sigma[0] < w.pos_tau[0] && w.pos_tau[1] < w.pos_sigma[1]);
                }
            }
        }
    }

    #[test]
    fn family_json_shape() {
        let g = greedy_family(RelationKind::Disjoint, 3).unwrap();
        let v = serde_json::to_value(&g).unwrap();
        assert_eq!(v["relation"], "disjoint");
        assert_eq!(v["params"]["k"], serde_json::Value::Null);
        assert_eq!(v["guarantee"], "6/125");
        assert_eq!(v["members"], serde_json::json!([[1, 2, 3]]));
    }
}
