//! Shared test support: seeded generators and definition-level order
//! oracles used by both the acceptance and the property suites.

#![allow(dead_code)]

use std::cmp::Ordering;

use bwtmerge::oracle::{self, TrieModel};
use bwtmerge::{Alphabet, BitVec, CircularMode, StringCollection};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Alphabet of exactly `sigma` letters starting at `a`.
pub fn fixed_alphabet(sigma: u8) -> Alphabet {
    let bytes: Vec<u8> = (0..sigma).map(|i| b'a' + i).collect();
    Alphabet::from_docs(&[bytes]).unwrap()
}

fn random_doc(rng: &mut ChaCha8Rng, sigma: u8, max_len: usize) -> Vec<u8> {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| rng.gen_range(1..=sigma)).collect()
}

/// A random collection over exactly `sigma` symbols.
pub fn random_collection(
    rng: &mut ChaCha8Rng,
    sigma: u8,
    docs: usize,
    max_len: usize,
) -> StringCollection {
    let alphabet = fixed_alphabet(sigma);
    let docs = (0..docs).map(|_| random_doc(rng, sigma, max_len)).collect();
    StringCollection::from_internal(docs, alphabet).unwrap()
}

/// Splits a collection at a random interior point; both halves share the
/// alphabet.
pub fn random_split(
    rng: &mut ChaCha8Rng,
    coll: &StringCollection,
) -> (StringCollection, StringCollection) {
    let k = coll.doc_count();
    let at = rng.gen_range(1..k);
    (
        coll.subset(0..at).unwrap(),
        coll.subset(at..k).unwrap(),
    )
}

fn is_primitive(doc: &[u8]) -> bool {
    (1..doc.len()).all(|shift| (0..doc.len()).any(|i| doc[i] != doc[(i + shift) % doc.len()]))
}

fn is_rotation(a: &[u8], b: &[u8]) -> bool {
    a.len() == b.len()
        && (0..a.len()).any(|s| (0..a.len()).all(|i| a[i] == b[(i + s) % b.len()]))
}

/// Two circular-valid collections over one alphabet; with probability ~1/2
/// per candidate, a side-1 document is a rotated copy of a side-0 document.
pub fn random_circular_pair(
    rng: &mut ChaCha8Rng,
    sigma: u8,
    docs_per_side: usize,
    max_len: usize,
) -> (StringCollection, StringCollection) {
    let alphabet = fixed_alphabet(sigma);
    let mut side0: Vec<Vec<u8>> = Vec::new();
    while side0.len() < docs_per_side {
        let d = random_doc(rng, sigma, max_len);
        if is_primitive(&d) && !side0.iter().any(|e| is_rotation(e, &d)) {
            side0.push(d);
        }
    }
    let mut side1: Vec<Vec<u8>> = Vec::new();
    while side1.len() < docs_per_side {
        let d = if rng.gen_bool(0.5) {
            // deliberate cross-duplicate: a rotation of a side-0 document
            let src = &side0[rng.gen_range(0..side0.len())];
            let shift = rng.gen_range(0..src.len());
            let mut d = src[shift..].to_vec();
            d.extend_from_slice(&src[..shift]);
            d
        } else {
            random_doc(rng, sigma, max_len)
        };
        if is_primitive(&d) && !side1.iter().any(|e| is_rotation(e, &d)) {
            side1.push(d);
        }
    }
    (
        StringCollection::from_internal(side0, alphabet.clone()).unwrap(),
        StringCollection::from_internal(side1, alphabet).unwrap(),
    )
}

/// Two permuterm-valid collections (documents distinct within each side);
/// some side-1 documents are exact copies of side-0 documents.
pub fn random_permuterm_pair(
    rng: &mut ChaCha8Rng,
    sigma: u8,
    docs_per_side: usize,
    max_len: usize,
) -> (StringCollection, StringCollection) {
    let alphabet = fixed_alphabet(sigma);
    let mut side0: Vec<Vec<u8>> = Vec::new();
    while side0.len() < docs_per_side {
        let d = random_doc(rng, sigma, max_len);
        if !side0.contains(&d) {
            side0.push(d);
        }
    }
    let mut side1: Vec<Vec<u8>> = Vec::new();
    while side1.len() < docs_per_side {
        let d = if rng.gen_bool(0.5) {
            side0[rng.gen_range(0..side0.len())].clone()
        } else {
            random_doc(rng, sigma, max_len)
        };
        if !side1.contains(&d) {
            side1.push(d);
        }
    }
    (
        StringCollection::from_internal(side0, alphabet.clone()).unwrap(),
        StringCollection::from_internal(side1, alphabet).unwrap(),
    )
}

/// A random set of distinct documents for trie merging.
pub fn random_string_set(
    rng: &mut ChaCha8Rng,
    sigma: u8,
    docs: usize,
    max_len: usize,
) -> Vec<Vec<u8>> {
    let mut set: Vec<Vec<u8>> = Vec::new();
    while set.len() < docs {
        let d = random_doc(rng, sigma, max_len);
        if !set.contains(&d) {
            set.push(d);
        }
    }
    set
}

/// The suffixes of each side embedded into one shared value space:
/// side-0 terminators first, then side-1 terminators, then ordinary
/// symbols, so that cross-side prefix comparisons match the merge order.
pub struct SuffixPrefixOracle {
    pub side0: Vec<Vec<u32>>,
    pub side1: Vec<Vec<u32>>,
}

impl SuffixPrefixOracle {
    pub fn new(c0: &StringCollection, c1: &StringCollection) -> Self {
        let v0 = oracle::sa_build(c0);
        let v1 = oracle::sa_build(c1);
        let k0 = v0.doc_count() as u32;
        let k1 = v1.doc_count() as u32;
        let side0 = (0..v0.n())
            .map(|i| {
                v0.suffix_embed(i)
                    .iter()
                    .map(|&v| if v < k0 { v } else { v + k1 })
                    .collect()
            })
            .collect();
        let side1 = (0..v1.n())
            .map(|i| v1.suffix_embed(i).iter().map(|&v| v + k0).collect())
            .collect();
        SuffixPrefixOracle { side0, side1 }
    }

    /// Compares the length-`h` prefixes of side-0 suffix `i` and side-1
    /// suffix `j`.
    pub fn prefix_cmp(&self, i: usize, j: usize, h: usize) -> Ordering {
        let a = &self.side0[i];
        let b = &self.side1[j];
        a[..h.min(a.len())].cmp(&b[..h.min(b.len())])
    }
}

/// Positions of the i-th 0 and j-th 1 for every ordinal, from an
/// interleave vector.
pub fn bit_positions(z: &BitVec) -> (Vec<usize>, Vec<usize>) {
    let mut zeros = Vec::new();
    let mut ones = Vec::new();
    for (pos, b) in z.iter().enumerate() {
        if b {
            ones.push(pos);
        } else {
            zeros.push(pos);
        }
    }
    (zeros, ones)
}

/// Sorted upward-path strings of a trie's internal nodes.
pub fn pi_strings(trie: &TrieModel) -> Vec<Vec<u8>> {
    trie.sorted_internal_paths()
}

/// Compares length-`h` prefixes of two finite strings (shorter strings
/// compare as themselves).
pub fn finite_prefix_cmp(a: &[u8], b: &[u8], h: usize) -> Ordering {
    a[..h.min(a.len())].cmp(&b[..h.min(b.len())])
}

/// Compares length-`h` prefixes of the infinite periodic extensions.
pub fn periodic_prefix_cmp(a: &[u8], b: &[u8], h: usize) -> Ordering {
    for i in 0..h {
        let x = a[i % a.len()];
        let y = b[i % b.len()];
        if x != y {
            return x.cmp(&y);
        }
    }
    Ordering::Equal
}

/// All rotations of a circular collection's units in rotation order per
/// document, as materialized symbol strings with ordinals per side.
pub fn rotations_in_input_order(
    coll: &StringCollection,
    mode: CircularMode,
) -> Vec<Vec<u8>> {
    let view = oracle::csa_build(coll, mode).unwrap();
    view.rotations()
        .iter()
        .map(|&r| view.rotation_symbols(r))
        .collect()
}

// ---------------------------------------------------------------------------
// Reusable invariant checks, shared by the acceptance and property suites.
// ---------------------------------------------------------------------------

use bwtmerge::{oracle as bw_oracle, LcpMergeRun, PermutermMergeRun};

/// Checks the per-pass order property of the linear merge on one split
/// collection: after pass `h` the i-th 0 precedes the j-th 1 exactly when
/// the length-`h` context prefixes compare `<=`. Also checks boundary
/// write-once and monochrome-range stability along the way.
pub fn check_linear_pass_properties(c0: &StringCollection, c1: &StringCollection) {
    let b0 = bw_oracle::bwt_build(c0);
    let b1 = bw_oracle::bwt_build(c1);
    let oracle = SuffixPrefixOracle::new(c0, c1);
    let n = b0.len() + b1.len();
    let mut run = LcpMergeRun::new(&b0, &b1).unwrap();
    let mut z_history: Vec<Vec<bool>> = Vec::new();
    let mut prev_bounds: Vec<u32> = run.boundaries().to_vec();
    let mut h = 0usize;
    loop {
        let more = run.step().unwrap();
        h += 1;
        // write-once: entries only move from 0 to the pass number
        for (i, (&old, &new)) in prev_bounds.iter().zip(run.boundaries()).enumerate() {
            if old != 0 {
                assert_eq!(old, new, "boundary {i} rewritten at pass {h}");
            } else {
                assert!(
                    new == 0 || new == h as u32,
                    "boundary {i} got stale value {new} at pass {h}"
                );
            }
        }
        prev_bounds = run.boundaries().to_vec();
        let (zeros, ones) = bit_positions(run.z());
        for (i, &pz) in zeros.iter().enumerate() {
            for (j, &po) in ones.iter().enumerate() {
                let expect = oracle.prefix_cmp(i, j, h) != Ordering::Greater;
                assert_eq!(
                    pz < po,
                    expect,
                    "pass {h}: zero {i} at {pz} vs one {j} at {po}"
                );
            }
        }
        z_history.push(run.z().iter().collect());
        if !more {
            break;
        }
    }
    // monochrome stability: a single-origin range delimited by boundaries
    // set by pass g keeps its bit content in every later pass
    let final_bounds = run.boundaries().to_vec();
    for g in 1..=h {
        let zbits = &z_history[g - 1];
        let boundary_at = |i: usize| final_bounds[i] != 0 && final_bounds[i] <= g as u32;
        let mut start = 0usize;
        for end in 1..=n {
            if end == n || boundary_at(end) {
                let range = &zbits[start..end];
                if range.iter().all(|&b| b == range[0]) {
                    for later in &z_history[g - 1..] {
                        assert_eq!(
                            &later[start..end],
                            range,
                            "single-origin range {start}..{end} changed after pass {g}"
                        );
                    }
                }
                start = end;
            }
        }
    }
}

/// Checks the per-pass order property of the trie merge: after pass `h`
/// the i-th 0 precedes the j-th 1 (both skipping the root entries) exactly
/// when the length-`h` upward-path prefixes compare `<=`.
pub fn check_xbwt_pass_property(set0: &[Vec<u8>], set1: &[Vec<u8>], alphabet: &Alphabet) {
    let coll0 = StringCollection::from_internal(set0.to_vec(), alphabet.clone()).unwrap();
    let coll1 = StringCollection::from_internal(set1.to_vec(), alphabet.clone()).unwrap();
    let t0 = bw_oracle::trie_build(&coll0);
    let t1 = bw_oracle::trie_build(&coll1);
    let pi0 = pi_strings(&t0);
    let pi1 = pi_strings(&t1);
    let x0 = bw_oracle::xbwt_build(&t0, alphabet.sigma());
    let x1 = bw_oracle::xbwt_build(&t1, alphabet.sigma());
    let mut run = bwtmerge::XbwtMergeRun::new(&x0, &x1).unwrap();
    let mut h = 0usize;
    loop {
        let more = run.step().unwrap();
        h += 1;
        let (zeros, ones) = bit_positions(run.z());
        for (i, &pz) in zeros.iter().enumerate().skip(1) {
            for (j, &po) in ones.iter().enumerate().skip(1) {
                let expect = finite_prefix_cmp(&pi0[i], &pi1[j], h) != Ordering::Greater;
                assert_eq!(pz < po, expect, "pass {h}: path {i} vs path {j}");
            }
        }
        if !more {
            break;
        }
    }
}

/// Checks the per-pass order property of the circular merge: after pass
/// `h` the i-th 0 precedes the j-th 1 exactly when the length-`h` prefixes
/// of the periodic extensions compare `<=`.
pub fn check_circular_pass_property(
    c0: &StringCollection,
    c1: &StringCollection,
    mode: CircularMode,
) {
    let rots0 = rotations_in_input_order(c0, mode);
    let rots1 = rotations_in_input_order(c1, mode);
    let (b0, _) = bw_oracle::cbwt_build(c0, mode).unwrap();
    let (b1, _) = bw_oracle::cbwt_build(c1, mode).unwrap();
    let mut run = bwtmerge::CircularMergeRun::new(&b0, &b1).unwrap();
    let mut h = 0usize;
    loop {
        let more = run.step().unwrap();
        h += 1;
        let (zeros, ones) = bit_positions(run.z());
        for (i, &pz) in zeros.iter().enumerate() {
            for (j, &po) in ones.iter().enumerate() {
                let expect = periodic_prefix_cmp(&rots0[i], &rots1[j], h) != Ordering::Greater;
                assert_eq!(pz < po, expect, "pass {h}: rotation {i} vs rotation {j}");
            }
        }
        if !more {
            break;
        }
    }
}

/// Steps a permuterm merge checking that per-row terminator counts never
/// decrease and saturate at 2.
pub fn check_permuterm_counter_saturation(c0: &StringCollection, c1: &StringCollection) {
    let (b0, _) = bw_oracle::cbwt_build(c0, CircularMode::Permuterm).unwrap();
    let (b1, _) = bw_oracle::cbwt_build(c1, CircularMode::Permuterm).unwrap();
    let mut run = PermutermMergeRun::new(&b0, &b1, 1).unwrap();
    let mut last: Vec<u8> = vec![0; b0.len() + b1.len()];
    loop {
        let more = run.step().unwrap();
        let mut idx = 0usize;
        for input in 0..2usize {
            let len = if input == 0 { b0.len() } else { b1.len() };
            for ord in 0..len {
                let m = run.terminator_count(input, ord);
                assert!(m <= 2);
                assert!(
                    m >= last[idx],
                    "terminator count of row ({input},{ord}) decreased"
                );
                last[idx] = m;
                idx += 1;
            }
        }
        if !more {
            break;
        }
    }
}

/// Match-count of `inf_cmp` never exceeds the periodicity bound.
pub fn check_periodicity_bound(t: &[u8], s: &[u8]) {
    let (_, clcp) = bw_oracle::inf_cmp(t, s);
    let g = {
        let (mut a, mut b) = (t.len(), s.len());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    assert!(clcp as usize <= t.len() + s.len() - g);
}
