//! Pairwise "interlocking" relations on permutations of `[n]`, the families
//! they admit, and exact tools for checking how large those families get.
//!
//! - [`perm`]: one-line permutations, ranking, lexicographic enumeration.
//! - [`relations`]: the four pairwise relations and their witnesses.
//! - [`structure`]: functional digraph, monotone runs, interleaving.
//! - [`codec`]: injective encodings behind the counting bounds.
//! - [`families`]: greedy and block constructions.
//! - [`oracle`]: exact counts and maximum families by clique search.
//! - [`bounds`]: bound formulas and the verification harness.
//! - [`cli`]: the `interlock` binary.

pub mod arith;
pub mod bounds;
pub mod cli;
pub mod codec;
pub mod families;
pub mod oracle;
pub mod perm;
pub mod relations;
pub mod structure;

pub use perm::Permutation;
pub use relations::RelationKind;
