//! Brute-force reference constructions.
//!
//! Everything here is built directly from the definitions by explicit
//! comparison and enumeration. The constructions are quadratic and meant for
//! moderate inputs; they are the ground truth the merge engines are tested
//! against, and the builders behind the `build` and `verify` commands.

mod circular;
mod suffix;
mod trie;

pub use circular::{
    cbwt_build, circular_union_dedup, clcp_build, csa_build, inf_cmp, validate_circular,
    CircularSuffixArrayView, Rotation,
};
pub use suffix::{bwt_and_lcp_build, bwt_build, lcp_build, sa_build, SuffixArrayView};
pub use trie::{trie_build, xbwt_build, TrieModel};
