//! Merging of BWT-family compressed indices.
//!
//! Three index families are covered, each with a brute-force reference
//! construction and merge engines that combine two existing indices
//! without rebuilding from scratch:
//!
//! * multi-string Burrows-Wheeler transforms, optionally together with
//!   their LCP arrays ([`merge_bwt`]);
//! * trie transforms, where nodes with equal upward paths fuse
//!   ([`merge_xbwt`]);
//! * circular and permuterm transforms, where identical rotations across
//!   the inputs are detected and dropped ([`merge_circular`]).
//!
//! The engines share one idea: a bit vector distributing the rows of the
//! two inputs is refined by one context symbol per pass, and ranges whose
//! outcome is settled are skipped in later passes by replaying their
//! counter effects from compact records.
//!
//! Start from [`StringCollection::remap`], build reference indices with
//! [`oracle`], and merge with the engine matching the index family. The
//! `examples/` directory has one runnable walkthrough per capability, and
//! the `bwtmerge` binary drives the same operations from the command line.

pub mod alphabet;
pub mod bits;
pub mod error;
pub mod index;
pub mod io;
pub mod merge_bwt;
pub mod merge_circular;
pub mod merge_xbwt;
pub mod oracle;

pub mod cli;

pub use alphabet::{Alphabet, StringCollection};
pub use bits::{BitVec, TwoBitVec};
pub use error::{Error, Result};
pub use index::{lcp_stats, AggregateStat, IndexStats, LcpArray, MultiBwt};
pub use merge_bwt::{
    gap_merge, gap_merge_bwt_only, hm_merge, hm_merge_lcp, interleave_apply, reconstruct_lcp,
    LcpMergeRun, LcpPair, MergeReport,
};
pub use merge_circular::{
    cbwt_gap_merge, cbwt_hm_merge, clcp_stats, permuterm_merge, Cbwt, CircularMergeRun,
    CircularMode, DuplicatePair, LengthStructure, PermutermMergeRun,
};
pub use merge_xbwt::{fuse_groups, xbwt_gap_merge, xbwt_hm_merge, Xbwt, XbwtMergeRun};
