//! Standalone property suites: the per-pass order invariants of the three
//! merge families, boundary and counter discipline, the periodicity bound,
//! and randomized equality of independent computation routes.

mod common;

use std::cmp::Ordering;

use bwtmerge::oracle::{self, inf_cmp};
use bwtmerge::{
    cbwt_gap_merge, cbwt_hm_merge, gap_merge, gap_merge_bwt_only, hm_merge, hm_merge_lcp,
    interleave_apply, lcp_stats, CircularMode, StringCollection,
};
use common::*;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn linear_pass_property_small_collections() {
    let mut r = rng(11);
    for _ in 0..60 {
        let sigma = [2u8, 3][r.gen_range(0..2)];
        let docs = r.gen_range(2..=4);
        let coll = random_collection(&mut r, sigma, docs, 5);
        if coll.len_with_terminators() > 24 {
            continue;
        }
        let (c0, c1) = random_split(&mut r, &coll);
        check_linear_pass_properties(&c0, &c1);
    }
}

#[test]
fn xbwt_pass_property_small_sets() {
    let mut r = rng(12);
    for _ in 0..40 {
        let sigma = 2u8;
        let alphabet = fixed_alphabet(sigma);
        let n0 = r.gen_range(1..=3);
        let n1 = r.gen_range(1..=3);
        let set0 = random_string_set(&mut r, sigma, n0, 4);
        let set1 = random_string_set(&mut r, sigma, n1, 4);
        check_xbwt_pass_property(&set0, &set1, &alphabet);
    }
}

#[test]
fn circular_pass_property_small_collections() {
    let mut r = rng(13);
    for i in 0..40 {
        let sigma = [2u8, 3][i % 2];
        let (c0, c1) = random_circular_pair(&mut r, sigma, 2, 5);
        if c0.symbol_len() + c1.symbol_len() <= 24 {
            check_circular_pass_property(&c0, &c1, CircularMode::Circular);
        }
    }
}

#[test]
fn permuterm_counters_saturate() {
    let mut r = rng(14);
    for i in 0..40 {
        let sigma = [2u8, 3][i % 2];
        let (c0, c1) = random_permuterm_pair(&mut r, sigma, 2, 5);
        check_permuterm_counter_saturation(&c0, &c1);
    }
}

#[test]
fn periodicity_bound_exhaustive_binary() {
    let mut shorts: Vec<Vec<u8>> = Vec::new();
    for len in 1..=5usize {
        for bits in 0..(1usize << len) {
            shorts.push((0..len).map(|i| 1 + ((bits >> i) & 1) as u8).collect());
        }
    }
    for a in &shorts {
        for b in &shorts {
            check_periodicity_bound(a, b);
        }
    }
}

/// The infinite-extension comparison is a strict weak order on primitive
/// rotation-distinct strings: exhaustive on binary strings up to length 5.
#[test]
fn inf_cmp_is_a_strict_weak_order() {
    let mut strings: Vec<Vec<u8>> = Vec::new();
    for len in 1..=5usize {
        for bits in 0..(1usize << len) {
            strings.push((0..len).map(|i| 1 + ((bits >> i) & 1) as u8).collect());
        }
    }
    for a in &strings {
        for b in &strings {
            let (ab, _) = inf_cmp(a, b);
            let (ba, _) = inf_cmp(b, a);
            assert_eq!(ab, ba.reverse(), "antisymmetry for {a:?} {b:?}");
            for c in &strings {
                let (bc, _) = inf_cmp(b, c);
                let (ac, _) = inf_cmp(a, c);
                if ab == Ordering::Less && bc != Ordering::Greater {
                    assert_ne!(ac, Ordering::Greater, "transitivity {a:?} {b:?} {c:?}");
                }
                if ab == Ordering::Equal && bc == Ordering::Equal {
                    assert_eq!(ac, Ordering::Equal, "equality chain {a:?} {b:?} {c:?}");
                }
            }
        }
    }
}

/// Iteration counts stay within the prefix-depth bounds.
#[test]
fn iteration_counts_track_depths() {
    let mut r = rng(15);
    for _ in 0..60 {
        let sigma = [2u8, 4][r.gen_range(0..2)];
        let docs = r.gen_range(2..=6);
        let coll = random_collection(&mut r, sigma, docs, 16);
        let (c0, c1) = random_split(&mut r, &coll);
        let b0 = oracle::bwt_build(&c0);
        let b1 = oracle::bwt_build(&c1);
        let lcp = oracle::lcp_build(&coll);
        let max_lcp = lcp_stats(&lcp).max;
        let (_, _, report) = hm_merge(&b0, &b1).unwrap();
        assert!(
            (report.iterations as u64) <= max_lcp + 2,
            "{} passes for max LCP {max_lcp}",
            report.iterations
        );
    }
    // circular count against the circular LCP maximum
    for i in 0..40 {
        let sigma = [2u8, 3][i % 2];
        let (c0, c1) = random_circular_pair(&mut r, sigma, 2, 6);
        let (b0, _) = oracle::cbwt_build(&c0, CircularMode::Circular).unwrap();
        let (b1, _) = oracle::cbwt_build(&c1, CircularMode::Circular).unwrap();
        let union = oracle::circular_union_dedup(&c0, &c1, CircularMode::Circular).unwrap();
        // duplicates compare equal up to their periodicity bound, which the
        // deduped union's neighbours dominate together with the pair bound
        let clcp = oracle::clcp_build(&union, CircularMode::Circular).unwrap();
        let mut bound = lcp_stats(&clcp).max;
        for d0 in c0.docs() {
            for d1 in c1.docs() {
                if let (Ordering::Equal, v) = inf_cmp(d0, d1) {
                    bound = bound.max(v);
                }
            }
        }
        let out = cbwt_hm_merge(&b0, &b1).unwrap();
        assert!(
            (out.report.iterations as u64) <= bound + 2,
            "{} passes for circular bound {bound}",
            out.report.iterations
        );
    }
}

/// Trie merges stay within the union trie height plus a constant.
#[test]
fn xbwt_iterations_track_height() {
    let mut r = rng(16);
    for _ in 0..40 {
        let sigma = 2u8;
        let alphabet = fixed_alphabet(sigma);
        let n0 = r.gen_range(1..=4);
        let n1 = r.gen_range(1..=4);
        let set0 = random_string_set(&mut r, sigma, n0, 6);
        let set1 = random_string_set(&mut r, sigma, n1, 6);
        let mk = |set: &[Vec<u8>]| {
            let c = StringCollection::from_internal(set.to_vec(), alphabet.clone()).unwrap();
            oracle::xbwt_build(&oracle::trie_build(&c), sigma)
        };
        let x0 = mk(&set0);
        let x1 = mk(&set1);
        let mut union = set0.clone();
        union.extend(set1.iter().cloned());
        let ucoll = StringCollection::from_internal(union, alphabet.clone()).unwrap();
        let hgt = oracle::trie_build(&ucoll).hgt();
        let (_, report) = bwtmerge::xbwt_hm_merge(&x0, &x1).unwrap();
        assert!(
            report.iterations <= hgt + 2,
            "{} passes for height {hgt}",
            report.iterations
        );
    }
}

proptest! {
    /// Interleave with the trivial vector is concatenation; the merged
    /// sentinel ids shift the second input past the first.
    #[test]
    fn interleave_identity(seed in 0u64..500) {
        let mut r = rng(seed);
        let docs = r.gen_range(2..=5);
        let coll = random_collection(&mut r, 3, docs, 10);
        let (c0, c1) = random_split(&mut r, &coll);
        let b0 = oracle::bwt_build(&c0);
        let b1 = oracle::bwt_build(&c1);
        let mut z = bwtmerge::BitVec::new(b0.len() + b1.len(), false);
        for i in b0.len()..b0.len() + b1.len() {
            z.set(i, true);
        }
        let merged = interleave_apply(&z, &b0, &b1).unwrap();
        let mut symbols = b0.symbols().to_vec();
        symbols.extend_from_slice(b1.symbols());
        prop_assert_eq!(merged.symbols(), symbols.as_slice());
    }

    /// The merged transform is a pure function of the inputs: every engine
    /// and threshold produces identical output.
    #[test]
    fn threshold_independence(seed in 0u64..200) {
        let mut r = rng(seed);
        let sigma = [2u8, 4, 8][r.gen_range(0..3)];
        let docs = r.gen_range(2..=6);
        let coll = random_collection(&mut r, sigma, docs, 20);
        let (c0, c1) = random_split(&mut r, &coll);
        let (b0, l0) = oracle::bwt_and_lcp_build(&c0);
        let (b1, l1) = oracle::bwt_and_lcp_build(&c1);
        let reference = hm_merge_lcp(&b0, &b1).unwrap();
        for tau in [1usize, 3, 7, 1 << 16] {
            let gap = gap_merge(&b0, &l0, &b1, &l1, tau).unwrap();
            prop_assert_eq!(&gap.merged, &reference.merged);
            prop_assert_eq!(&gap.lcp, &reference.lcp);
            let two_bit = gap_merge_bwt_only(&b0, &b1, tau, false).unwrap();
            prop_assert_eq!(&two_bit.merged, &reference.merged);
        }
    }

    /// Circular: all engines agree with the deduped enumeration on both
    /// content and length structure.
    #[test]
    fn circular_engines_agree(seed in 0u64..200) {
        let mut r = rng(seed);
        let sigma = [2u8, 3][r.gen_range(0..2)];
        let (c0, c1) = random_circular_pair(&mut r, sigma, 2, 7);
        let union = oracle::circular_union_dedup(&c0, &c1, CircularMode::Circular).unwrap();
        let (expect, expect_len) = oracle::cbwt_build(&union, CircularMode::Circular).unwrap();
        let (b0, l0) = oracle::cbwt_build(&c0, CircularMode::Circular).unwrap();
        let (b1, l1) = oracle::cbwt_build(&c1, CircularMode::Circular).unwrap();
        let hm = cbwt_hm_merge(&b0, &b1).unwrap();
        prop_assert_eq!(&hm.merged, &expect);
        let gap = cbwt_gap_merge(&b0, &l0, &b1, &l1, 2).unwrap();
        prop_assert_eq!(&gap.merged, &expect);
        prop_assert_eq!(&gap.lengths, &expect_len);
    }
}
