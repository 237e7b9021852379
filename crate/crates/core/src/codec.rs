//! Injective per-vertex encodings of the permutations unrelated to the
//! identity.
//!
//! * **Quinary** (`1`–`5`), for permutations not locally disjoint from the
//!   identity: `1` fixed point, `2` smallest vertex of a cycle, `3` largest
//!   vertex, `4` interior vertex of the increasing run, `5` interior vertex
//!   of the decreasing run. Decoding is a stack walk over nested spans.
//! * **Parallel** (`f x y z Z`), for permutations not locally parallel to
//!   the identity: each vertex records the directions of its outgoing and
//!   incoming edges. Decoding matches sorted tails to sorted heads per
//!   direction. The five letters sit inside a six-letter alphabet.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;
use crate::relations::{locally_disjoint, locally_parallel};
use crate::structure::{monotone_runs, spans_laminar, Direction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Quinary,
    Parallel,
}

impl Scheme {
    pub fn alphabet(self) -> &'static [char] {
        match self {
            Scheme::Quinary => &['1', '2', '3', '4', '5'],
            Scheme::Parallel => &['f', 'x', 'y', 'z', 'Z'],
        }
    }

    /// Alphabet size used for the counting bound: 5 for quinary, 6 for the
    /// parallel scheme's ambient alphabet.
    pub fn bound_base(self) -> u64 {
        match self {
            Scheme::Quinary => 5,
            Scheme::Parallel => 6,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Quinary => "quinary",
            Scheme::Parallel => "parallel",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("{perm} is related to the identity, so it has no {scheme} code")]
    NotEligible { scheme: Scheme, perm: String },
    #[error("structural claim failed for {perm}: {detail}")]
    StructureViolation { perm: String, detail: String },
    #[error("malformed {scheme} code {code:?}: {detail}")]
    Malformed {
        scheme: Scheme,
        code: String,
        detail: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeWord {
    scheme: Scheme,
    symbols: String,
}

impl CodeWord {
    /// Accepts any non-empty string over the scheme's alphabet; structural
    /// validity is checked by the decoder.
    pub fn new(scheme: Scheme, symbols: impl Into<String>) -> Result<Self, CodecError> {
        let symbols = symbols.into();
        let bad = symbols.chars().find(|c| !scheme.alphabet().contains(c));
        if symbols.is_empty() || bad.is_some() {
            return Err(CodecError::Malformed {
                scheme,
                detail: match bad {
                    Some(c) => format!("symbol {c:?} outside alphabet"),
                    None => "empty code".into(),
                },
                code: symbols,
            });
        }
        Ok(CodeWord { scheme, symbols })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn as_str(&self) -> &str {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    fn malformed(&self, detail: impl Into<String>) -> CodecError {
        CodecError::Malformed {
            scheme: self.scheme,
            code: self.symbols.clone(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for CodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbols)
    }
}

pub fn encode(scheme: Scheme, p: &Permutation) -> Result<CodeWord, CodecError> {
    match scheme {
        Scheme::Quinary => encode_quinary(p),
        Scheme::Parallel => encode_parallel(p),
    }
}

pub fn decode(code: &CodeWord) -> Result<Permutation, CodecError> {
    match code.scheme {
        Scheme::Quinary => decode_quinary(code),
        Scheme::Parallel => decode_parallel(code),
    }
}

pub fn encode_quinary(p: &Permutation) -> Result<CodeWord, CodecError> {
    let n = p.len();
    let id = Permutation::identity(n);
    if locally_disjoint(p, &id).expect("same size").is_some() {
        return Err(CodecError::NotEligible {
            scheme: Scheme::Quinary,
            perm: p.to_string(),
        });
    }
    let violation = |detail: String| CodecError::StructureViolation {
        perm: p.to_string(),
        detail,
    };
    if !spans_laminar(p) {
        return Err(violation("cycle spans are not laminar".into()));
    }
    let mut symbols = vec!['1'; n];
    for cycle in p.cycle_decomposition().cycles {
        let runs = monotone_runs(p, &cycle).expect("cycle taken from the decomposition");
        if !runs.is_simple {
            return Err(violation(format!(
                "cycle {cycle:?} has {} monotone runs",
                runs.runs.len()
            )));
        }
        for run in &runs.runs {
            let interior = &run.vertices[1..run.vertices.len() - 1];
            let mark = match run.direction {
                Direction::Increasing => '4',
                Direction::Decreasing => '5',
            };
            for &v in interior {
                symbols[v - 1] = mark;
            }
        }
        let lo = *cycle.iter().min().unwrap();
        let hi = *cycle.iter().max().unwrap();
        symbols[lo - 1] = '2';
        symbols[hi - 1] = '3';
    }
    Ok(CodeWord {
        scheme: Scheme::Quinary,
        symbols: symbols.into_iter().collect(),
    })
}

struct OpenCycle {
    min: usize,
    rising: Vec<usize>,
    falling: Vec<usize>,
}

pub fn decode_quinary(code: &CodeWord) -> Result<Permutation, CodecError> {
    if code.scheme != Scheme::Quinary {
        return Err(code.malformed("not a quinary code word"));
    }
    let n = code.len();
    let mut image = vec![0usize; n];
    let mut open: Vec<OpenCycle> = Vec::new();
    for (i, c) in code.symbols.chars().enumerate() {
        let v = i + 1;
        match c {
            '1' => image[v - 1] = v,
            '2' => open.push(OpenCycle {
                min: v,
                rising: Vec::new(),
                falling: Vec::new(),
            }),
            '4' | '5' => {
                let top = open
                    .last_mut()
                    .ok_or_else(|| code.malformed(format!("'{c}' at {v} outside any cycle")))?;
                if c == '4' {
                    top.rising.push(v);
                } else {
                    top.falling.push(v);
                }
            }
            '3' => {
                let cyc = open
                    .pop()
                    .ok_or_else(|| code.malformed(format!("'3' at {v} closes no cycle")))?;
                // min → rising ascending → max → falling descending → min
                let mut walk = vec![cyc.min];
                walk.extend(&cyc.rising);
                walk.push(v);
                walk.extend(cyc.falling.iter().rev());
                for (j, &u) in walk.iter().enumerate() {
                    image[u - 1] = walk[(j + 1) % walk.len()];
                }
            }
            _ => unreachable!("alphabet checked on construction"),
        }
    }
    if !open.is_empty() {
        return Err(code.malformed(format!("{} cycle(s) left open", open.len())));
    }
    Permutation::new(image).map_err(|e| code.malformed(e.to_string()))
}

pub fn encode_parallel(p: &Permutation) -> Result<CodeWord, CodecError> {
    let n = p.len();
    if locally_parallel(p, &Permutation::identity(n)).expect("same size").is_some() {
        return Err(CodecError::NotEligible {
            scheme: Scheme::Parallel,
            perm: p.to_string(),
        });
    }
    let image = p.image();
    let positions = p.positions();
    let symbols = (1..=n)
        .map(|v| {
            let out = image[v - 1];
            let from = positions[v - 1];
            match (out.cmp(&v), v.cmp(&from)) {
                (std::cmp::Ordering::Equal, _) => 'f',
                (std::cmp::Ordering::Greater, std::cmp::Ordering::Greater) => 'z',
                (std::cmp::Ordering::Less, std::cmp::Ordering::Less) => 'Z',
                (std::cmp::Ordering::Greater, _) => 'x',
                (std::cmp::Ordering::Less, _) => 'y',
            }
        })
        .collect();
    Ok(CodeWord {
        scheme: Scheme::Parallel,
        symbols,
    })
}

pub fn decode_parallel(code: &CodeWord) -> Result<Permutation, CodecError> {
    if code.scheme != Scheme::Parallel {
        return Err(code.malformed("not a parallel code word"));
    }
    let n = code.len();
    let labelled = |set: &[char]| -> Vec<usize> {
        code.symbols
            .chars()
            .enumerate()
            .filter(|(_, c)| set.contains(c))
            .map(|(i, _)| i + 1)
            .collect()
    };
    let mut image = vec![0usize; n];
    for v in labelled(&['f']) {
        image[v - 1] = v;
    }
    for (tails, heads, rising) in [
        (labelled(&['x', 'z']), labelled(&['y', 'z']), true),
        (labelled(&['y', 'Z']), labelled(&['x', 'Z']), false),
    ] {
        let dir = if rising { "increasing" } else { "decreasing" };
        if tails.len() != heads.len() {
            return Err(code.malformed(format!(
                "{} {dir} tails but {} {dir} heads",
                tails.len(),
                heads.len()
            )));
        }
        for (&t, &h) in tails.iter().zip(&heads) {
            if (rising && t >= h) || (!rising && t <= h) {
                return Err(code.malformed(format!("matched {dir} edge {t}→{h} points the wrong way")));
            }
            image[t - 1] = h;
        }
    }
    Permutation::new(image).map_err(|e| code.malformed(e.to_string()))
}

/// Outcome of encoding every eligible permutation of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sweep {
    pub scheme: Scheme,
    pub n: usize,
    /// Permutations not related to the identity.
    pub eligible: u64,
    pub distinct_codes: u64,
    pub round_trip_failures: u64,
    pub structure_violations: u64,
    /// Distinct symbols seen across all code words, in alphabet order.
    pub symbols_used: String,
}

impl Sweep {
    /// Every eligible permutation encoded, decoded back to itself, and got
    /// its own code word.
    pub fn injective(&self) -> bool {
        self.round_trip_failures == 0 && self.structure_violations == 0 && self.distinct_codes == self.eligible
    }
}

/// Encodes all eligible permutations of `[n]` with `scheme` and checks the
/// round trip and distinctness of the code words.
pub fn sweep(scheme: Scheme, n: usize) -> Sweep {
    let mut codes = std::collections::HashSet::new();
    let mut out = Sweep {
        scheme,
        n,
        eligible: 0,
        distinct_codes: 0,
        round_trip_failures: 0,
        structure_violations: 0,
        symbols_used: String::new(),
    };
    let mut used = [false; 5];
    for p in Permutation::all(n) {
        match encode(scheme, &p) {
            Err(CodecError::NotEligible { .. }) => continue,
            Err(_) => {
                out.eligible += 1;
                out.structure_violations += 1;
            }
            Ok(code) => {
                out.eligible += 1;
                for c in code.as_str().chars() {
                    let i = scheme.alphabet().iter().position(|&a| a == c).unwrap();
                    used[i] = true;
                }
                if decode(&code).as_ref() != Ok(&p) {
                    out.round_trip_failures += 1;
                }
                codes.insert(code.symbols);
            }
        }
    }
    out.distinct_codes = codes.len() as u64;
    out.symbols_used = scheme
        .alphabet()
        .iter()
        .zip(used)
        .filter(|(_, u)| *u)
        .map(|(c, _)| c)
        .collect();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn q(s: &str) -> CodeWord {
        CodeWord::new(Scheme::Quinary, s).unwrap()
    }

    fn par(s: &str) -> CodeWord {
        CodeWord::new(Scheme::Parallel, s).unwrap()
    }

    #[test]
    fn quinary_encode_examples() {
        assert_eq!(encode_quinary(&p("1,2,3,4")).unwrap().as_str(), "1111");
        assert_eq!(encode_quinary(&p("4,3,2,1")).unwrap().as_str(), "2233");
        assert_eq!(encode_quinary(&p("2,3,1")).unwrap().as_str(), "243");
        assert_eq!(encode_quinary(&p("3,1,2")).unwrap().as_str(), "253");
        assert!(matches!(
            encode_quinary(&p("3,4,1,2")),
            Err(CodecError::NotEligible { .. })
        ));
    }

    #[test]
    fn quinary_decode_examples() {
        assert_eq!(decode_quinary(&q("1111")).unwrap(), p("1,2,3,4"));
        assert_eq!(decode_quinary(&q("2233")).unwrap(), p("4,3,2,1"));
        assert_eq!(decode_quinary(&q("243")).unwrap(), p("2,3,1"));
        // '3' with nothing open, open cycle at end, '4'/'5' outside a cycle,
        // and an outer cycle left open after an inner one closes
        for bad in ["32", "2", "41", "5", "2423"] {
            assert!(
                matches!(decode_quinary(&q(bad)), Err(CodecError::Malformed { .. })),
                "{bad}"
            );
        }
        assert!(CodeWord::new(Scheme::Quinary, "126").is_err());
        assert!(CodeWord::new(Scheme::Quinary, "").is_err());
    }

    #[test]
    fn parallel_examples() {
        assert_eq!(encode_parallel(&p("1,2,3")).unwrap().as_str(), "fff");
        assert_eq!(encode_parallel(&p("2,3,1")).unwrap().as_str(), "xzy");
        assert_eq!(encode_parallel(&p("2,1")).unwrap().as_str(), "xy");
        assert_eq!(decode_parallel(&par("fff")).unwrap(), p("1,2,3"));
        assert_eq!(decode_parallel(&par("xzy")).unwrap(), p("2,3,1"));
        assert!(matches!(
            decode_parallel(&par("xz")),
            Err(CodecError::Malformed { .. })
        ));
        // y before x: the only increasing edge would run 2 → 1
        assert!(matches!(
            decode_parallel(&par("yx")),
            Err(CodecError::Malformed { .. })
        ));
        assert!(CodeWord::new(Scheme::Parallel, "fX").is_err());
    }

    #[test]
    fn parallel_rejects_related_permutations() {
        // edges 1→4 and 2→3 are nested increasing edges with reversed heads
        assert!(matches!(
            encode_parallel(&p("4,3,2,1")),
            Err(CodecError::NotEligible { .. })
        ));
    }

    #[test]
    fn sweeps_at_four() {
        let q = sweep(Scheme::Quinary, 4);
        assert!(q.injective());
        assert_eq!(q.symbols_used, "12345");
        let par = sweep(Scheme::Parallel, 4);
        assert!(par.injective());
        assert!(par.eligible <= 6u64.pow(4));
    }

    #[test]
    fn scheme_mismatch_is_malformed() {
        assert!(decode_parallel(&q("11")).is_err());
        assert!(decode_quinary(&par("ff")).is_err());
    }
}
