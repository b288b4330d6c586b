//! Merging circular transforms under the infinite-extension order.
//!
//! Rows never leave the refinement (there is no absorbing terminator
//! context), so two identical rotations from opposite inputs are never told
//! apart: they end as a two-row block whose boundary entry stays unset, and
//! the second input's copy is dropped from the output. The skipping variant
//! bounds how long such a pair must be watched with the periodicity bound
//! `|t| + |s| - gcd(|t|, |s|)`; the permuterm variant instead counts
//! terminator symbols seen per row and settles a pair once both rows have
//! passed two of them.

use std::collections::HashMap;

use crate::bits::{BitVec, TwoBitVec};
use crate::error::{Error, Result};
use crate::index::AggregateStat;
use crate::merge_bwt::MergeReport;
use crate::oracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum CircularMode {
    /// Rotations of the documents themselves; documents must be primitive.
    Circular,
    /// Rotations of documents closed by a shared rank-0 terminator.
    Permuterm,
}

/// Circular Burrows-Wheeler transform of a document collection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cbwt {
    symbols: Vec<u8>,
    sigma: u8,
    mode: CircularMode,
}

impl Cbwt {
    pub fn new(symbols: Vec<u8>, sigma: u8, mode: CircularMode) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyCollection);
        }
        if symbols.iter().any(|&s| s > sigma) {
            return Err(Error::corrupt(format!("symbol above sigma={sigma}")));
        }
        let zeros = symbols.iter().filter(|&&s| s == 0).count();
        match mode {
            CircularMode::Circular if zeros > 0 => {
                return Err(Error::corrupt(
                    "terminator symbols in a plain circular transform",
                ))
            }
            CircularMode::Permuterm if zeros == 0 => {
                return Err(Error::MissingTerminator { index: 0 })
            }
            _ => {}
        }
        Ok(Cbwt {
            symbols,
            sigma,
            mode,
        })
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn sigma(&self) -> u8 {
        self.sigma
    }

    pub fn mode(&self) -> CircularMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    fn symbol_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.sigma as usize + 1];
        for &s in &self.symbols {
            counts[s as usize] += 1;
        }
        counts
    }
}

/// Per-position document membership of a circular transform plus the
/// document lengths, documents numbered by first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthStructure {
    doc_of: Vec<u32>,
    doc_len: Vec<u32>,
}

impl LengthStructure {
    pub fn new(doc_of: Vec<u32>, doc_len: Vec<u32>) -> Result<Self> {
        let mut seen = 0u32;
        let mut counts = vec![0u64; doc_len.len()];
        for &d in &doc_of {
            if d > seen {
                return Err(Error::corrupt("documents not numbered by first appearance"));
            }
            if d == seen {
                seen += 1;
            }
            *counts
                .get_mut(d as usize)
                .ok_or_else(|| Error::corrupt("document id out of range"))? += 1;
        }
        if seen as usize != doc_len.len() {
            return Err(Error::corrupt("unreferenced document lengths"));
        }
        for (d, (&c, &l)) in counts.iter().zip(doc_len.iter()).enumerate() {
            if c != l as u64 {
                return Err(Error::corrupt(format!(
                    "document {d} has {c} rotations but length {l}"
                )));
            }
        }
        Ok(LengthStructure { doc_of, doc_len })
    }

    /// Builds from an arbitrary document labelling, renumbering the
    /// documents by first appearance and keeping only referenced ones.
    pub fn from_raw(doc_of: Vec<u32>, unit_lens: &[u32]) -> Self {
        let mut remap: HashMap<u32, u32> = HashMap::new();
        let mut doc_len = Vec::new();
        let doc_of = doc_of
            .into_iter()
            .map(|d| {
                *remap.entry(d).or_insert_with(|| {
                    doc_len.push(unit_lens[d as usize]);
                    (doc_len.len() - 1) as u32
                })
            })
            .collect();
        LengthStructure { doc_of, doc_len }
    }

    /// Recovers the structure from the transform itself: the rank-to-
    /// preceding-rotation map decomposes into one cycle per document.
    pub fn from_cbwt(cbwt: &Cbwt) -> Self {
        let n = cbwt.len();
        let counts = cbwt.symbol_counts();
        let mut start = vec![0u64; counts.len()];
        let mut acc = 0u64;
        for (c, &v) in counts.iter().enumerate() {
            start[c] = acc;
            acc += v;
        }
        let mut lf = vec![0u32; n];
        let mut next = start;
        for (i, &c) in cbwt.symbols().iter().enumerate() {
            lf[i] = next[c as usize] as u32;
            next[c as usize] += 1;
        }
        let mut doc_of = vec![u32::MAX; n];
        let mut doc_len = Vec::new();
        for i in 0..n {
            if doc_of[i] != u32::MAX {
                continue;
            }
            let d = doc_len.len() as u32;
            let mut j = i;
            let mut len = 0u32;
            loop {
                doc_of[j] = d;
                len += 1;
                j = lf[j] as usize;
                if j == i {
                    break;
                }
            }
            doc_len.push(len);
        }
        LengthStructure { doc_of, doc_len }
    }

    pub fn doc_of(&self) -> &[u32] {
        &self.doc_of
    }

    pub fn doc_lengths(&self) -> &[u32] {
        &self.doc_len
    }

    pub fn doc_count(&self) -> usize {
        self.doc_len.len()
    }

    pub fn len(&self) -> usize {
        self.doc_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doc_of.is_empty()
    }

    pub fn length_at(&self, pos: usize) -> u32 {
        self.doc_len[self.doc_of[pos] as usize]
    }
}

/// A detected pair of identical rotations; the second input's copy is the
/// one dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DuplicatePair {
    pub zero_ordinal: usize,
    pub one_ordinal: usize,
}

pub struct CircularMergeOutput {
    pub merged: Cbwt,
    pub interleave: BitVec,
    pub duplicates: Vec<DuplicatePair>,
    pub report: MergeReport,
}

/// Shared immutable facts of one circular merge.
struct CInputs<'a> {
    c0: &'a Cbwt,
    c1: &'a Cbwt,
    sigma: usize,
    f_init: Vec<u64>,
    n: usize,
}

impl<'a> CInputs<'a> {
    fn new(c0: &'a Cbwt, c1: &'a Cbwt) -> Result<Self> {
        if c0.sigma() != c1.sigma() {
            return Err(Error::AlphabetMismatch {
                left: c0.sigma(),
                right: c1.sigma(),
            });
        }
        if c0.mode() != c1.mode() {
            return Err(Error::corrupt("inputs of different circular modes"));
        }
        let sigma = c0.sigma() as usize;
        let mut counts = c0.symbol_counts();
        for (c, v) in c1.symbol_counts().into_iter().enumerate() {
            counts[c] += v;
        }
        let mut f_init = vec![0u64; sigma + 1];
        let mut acc = 0u64;
        for c in 0..=sigma {
            f_init[c] = acc;
            acc += counts[c];
        }
        Ok(CInputs {
            c0,
            c1,
            sigma,
            f_init,
            n: c0.len() + c1.len(),
        })
    }

    #[inline]
    fn symbol(&self, b: bool, pos: usize) -> u8 {
        if b {
            self.c1.symbols()[pos]
        } else {
            self.c0.symbols()[pos]
        }
    }

    fn initial_z(&self) -> BitVec {
        let mut z = BitVec::new(self.n, false);
        for i in self.c0.len()..self.n {
            z.set(i, true);
        }
        z
    }
}

/// Stepwise circular merge with full boundary tracking. Every symbol routes
/// through the counting pass (there is no terminator branch); the run
/// quiesces when neither the interleave vector nor the boundary array
/// changes, at which point unset interior boundaries identify identical
/// rotation pairs.
pub struct CircularMergeRun<'a> {
    inputs: CInputs<'a>,
    z_prev: BitVec,
    z_cur: BitVec,
    boundaries: Vec<u32>,
    block_id: Vec<i64>,
    h: u32,
    quiescent: bool,
    report: MergeReport,
}

impl<'a> CircularMergeRun<'a> {
    pub fn new(c0: &'a Cbwt, c1: &'a Cbwt) -> Result<Self> {
        let inputs = CInputs::new(c0, c1)?;
        let n = inputs.n;
        let mut boundaries = vec![0u32; n + 1];
        boundaries[0] = 1;
        boundaries[n] = 1;
        let z_prev = inputs.initial_z();
        let sigma = inputs.sigma;
        Ok(CircularMergeRun {
            inputs,
            z_prev,
            z_cur: BitVec::new(n, false),
            boundaries,
            block_id: vec![-1; sigma + 1],
            h: 0,
            quiescent: false,
            report: MergeReport::new_empty(),
        })
    }

    pub fn z(&self) -> &BitVec {
        &self.z_prev
    }

    pub fn boundaries(&self) -> &[u32] {
        &self.boundaries
    }

    pub fn iterations(&self) -> u32 {
        self.h
    }

    pub fn is_done(&self) -> bool {
        self.quiescent
    }

    pub fn step(&mut self) -> Result<bool> {
        if self.quiescent {
            return Ok(false);
        }
        self.h += 1;
        let h = self.h;
        if h > 2 * self.inputs.n as u32 + 8 {
            return Err(Error::corrupt("merge did not reach a fixpoint"));
        }
        let mut f = self.inputs.f_init.clone();
        self.block_id.fill(-1);
        let mut id: i64 = 0;
        let mut cur = [0usize; 2];
        let mut writes = 0usize;
        for k in 0..self.inputs.n {
            let bk = self.boundaries[k];
            if bk != 0 && bk != h {
                id = k as i64;
            }
            let b = self.z_prev.get(k);
            let c = self.inputs.symbol(b, cur[b as usize]);
            cur[b as usize] += 1;
            let j = f[c as usize] as usize;
            f[c as usize] += 1;
            if self.block_id[c as usize] != id {
                self.block_id[c as usize] = id;
                if self.boundaries[j] == 0 {
                    self.boundaries[j] = h;
                    writes += 1;
                }
            }
            self.z_cur.set(j, b);
        }
        let changed = self.z_cur != self.z_prev;
        std::mem::swap(&mut self.z_prev, &mut self.z_cur);
        self.report.iterations += 1;
        self.report.active_per_iteration.push(self.inputs.n as u64);
        self.quiescent = !changed && writes == 0;
        Ok(!self.quiescent)
    }

    pub fn finish(mut self) -> Result<CircularMergeOutput> {
        while self.step()? {}
        let mut duplicates = Vec::new();
        let mut drop_pos = vec![false; self.inputs.n];
        let mut ord = [0usize; 2];
        let mut prev = (false, 0usize);
        for (i, b) in self.z_prev.iter().enumerate() {
            let o = ord[b as usize];
            ord[b as usize] += 1;
            if i > 0 && self.boundaries[i] == 0 {
                let (pb, po) = prev;
                if pb || !b {
                    return Err(Error::corrupt(
                        "identical rotations must pair a first-input row with a second-input row",
                    ));
                }
                duplicates.push(DuplicatePair {
                    zero_ordinal: po,
                    one_ordinal: o,
                });
                drop_pos[i] = true;
            }
            prev = (b, o);
        }
        let merged = apply_dedup(&self.z_prev, &drop_pos, self.inputs.c0, self.inputs.c1)?;
        Ok(CircularMergeOutput {
            merged,
            interleave: self.z_prev,
            duplicates,
            report: self.report,
        })
    }
}

fn apply_dedup(z: &BitVec, drop_pos: &[bool], c0: &Cbwt, c1: &Cbwt) -> Result<Cbwt> {
    let mut symbols = Vec::with_capacity(z.len());
    let mut cur = [0usize; 2];
    for (i, b) in z.iter().enumerate() {
        let s = if b {
            c1.symbols()[cur[1]]
        } else {
            c0.symbols()[cur[0]]
        };
        cur[b as usize] += 1;
        if !drop_pos[i] {
            symbols.push(s);
        }
    }
    Cbwt::new(symbols, c0.sigma(), c0.mode())
}

/// Circular merge run to completion.
pub fn cbwt_hm_merge(c0: &Cbwt, c1: &Cbwt) -> Result<CircularMergeOutput> {
    CircularMergeRun::new(c0, c1)?.finish()
}

#[derive(Clone, Debug)]
struct CSkipRecord {
    start: u32,
    end: u32,
    r0: u32,
    r1: u32,
    occ: Box<[u32]>,
    /// Set when the record is a confirmed identical-rotation pair.
    dup: Option<DuplicatePair>,
}

fn crecord_bytes(sigma: usize) -> usize {
    16 + (sigma + 1) * 4
}

fn cpush_merged(records: &mut Vec<CSkipRecord>, rec: CSkipRecord) {
    if let Some(tail) = records.last_mut() {
        if tail.end + 1 == rec.start && tail.dup.is_none() && rec.dup.is_none() {
            tail.end = rec.end;
            tail.r0 += rec.r0;
            tail.r1 += rec.r1;
            for (a, b) in tail.occ.iter_mut().zip(rec.occ.iter()) {
                *a += b;
            }
            return;
        }
    }
    records.push(rec);
}

pub struct CircularGapOutput {
    pub merged: Cbwt,
    pub lengths: LengthStructure,
    pub interleave: BitVec,
    pub duplicates: Vec<DuplicatePair>,
    pub report: MergeReport,
}

/// Merge with skipping. Single-origin blocks are skipped once processed;
/// a two-row mixed block is watched until it either splits or survives to
/// iteration `len0 + len1 - gcd`, at which point the rows are identical and
/// the pair is retired. The interleave vector also merges the two length
/// structures.
pub fn cbwt_gap_merge(
    c0: &Cbwt,
    len0: &LengthStructure,
    c1: &Cbwt,
    len1: &LengthStructure,
    tau: usize,
) -> Result<CircularGapOutput> {
    if len0.len() != c0.len() || len1.len() != c1.len() {
        return Err(Error::corrupt("length structure does not match its input"));
    }
    let inputs = CInputs::new(c0, c1)?;
    let run = gap_loop(&inputs, tau, |block, h, gcd_memo| {
        // deadline for a candidate pair, memoized per length pair
        let l0 = len0.length_at(block.ord0);
        let l1 = len1.length_at(block.ord1);
        let key = if l0 <= l1 { (l0, l1) } else { (l1, l0) };
        let d = *gcd_memo
            .entry(key)
            .or_insert_with(|| oracle_gcd(l0 as usize, l1 as usize) as u32);
        let deadline = l0 + l1 - d;
        if h > deadline {
            PairVerdict::Identical
        } else {
            PairVerdict::Undecided
        }
    })?;
    let mut doc_of = Vec::with_capacity(inputs.n);
    let mut unit_lens: Vec<u32> = len0.doc_lengths().to_vec();
    unit_lens.extend_from_slice(len1.doc_lengths());
    let k0 = len0.doc_count() as u32;
    let mut cur = [0usize; 2];
    for (i, b) in run.z.iter().enumerate() {
        let d = if b {
            len1.doc_of()[cur[1]] + k0
        } else {
            len0.doc_of()[cur[0]]
        };
        cur[b as usize] += 1;
        if !run.drop_pos[i] {
            doc_of.push(d);
        }
    }
    let lengths = LengthStructure::from_raw(doc_of, &unit_lens);
    let merged = apply_dedup(&run.z, &run.drop_pos, c0, c1)?;
    Ok(CircularGapOutput {
        merged,
        lengths,
        interleave: run.z,
        duplicates: run.duplicates,
        report: run.report,
    })
}

fn oracle_gcd(a: usize, b: usize) -> usize {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// What the pair rule decided about a two-row mixed block.
enum PairVerdict {
    Identical,
    Undecided,
}

/// Bookkeeping bytes for one watched two-row block: its extent, the pair
/// ordinals and the memoized deadline.
const QUASI_BLOCK_BYTES: usize = 24;

/// A finished block handed to the pair rule.
struct PairBlock {
    ord0: usize,
    ord1: usize,
}

struct GapRunResult {
    z: BitVec,
    drop_pos: Vec<bool>,
    duplicates: Vec<DuplicatePair>,
    report: MergeReport,
}

/// The skipping loop shared by the circular and permuterm variants; the
/// pair rule decides when a two-row mixed block holds identical rotations.
fn gap_loop<F>(inputs: &CInputs<'_>, tau: usize, mut pair_rule: F) -> Result<GapRunResult>
where
    F: FnMut(&PairBlock, u32, &mut HashMap<(u32, u32), u32>) -> PairVerdict,
{
    let sigma = inputs.sigma;
    let tau = {
        let floor = sigma + 2;
        if tau < floor {
            log::warn!("skip threshold {tau} below {floor}, clamping up");
            floor
        } else {
            tau
        }
    };
    let n = inputs.n;
    let mut b2 = TwoBitVec::new(n + 1, 0);
    b2.set(0, 3);
    b2.set(n, 3);
    let mut z_prev = inputs.initial_z();
    let mut z_cur = BitVec::new(n, false);
    let mut block_id = vec![-1i64; sigma + 1];
    let mut records: Vec<CSkipRecord> = Vec::new();
    let mut next_records: Vec<CSkipRecord> = Vec::new();
    let mut gcd_memo: HashMap<(u32, u32), u32> = HashMap::new();
    let mut report = MergeReport::new_empty();
    let mut h: u32 = 0;

    struct Acc {
        start: usize,
        len: usize,
        r0: u32,
        r1: u32,
        ord0: usize,
        ord1: usize,
        occ: Vec<u32>,
        touched: Vec<u8>,
        monochrome: bool,
        first_bit: bool,
    }
    let mut acc = Acc {
        start: 0,
        len: 0,
        r0: 0,
        r1: 0,
        ord0: 0,
        ord1: 0,
        occ: vec![0u32; sigma + 1],
        touched: Vec::new(),
        monochrome: true,
        first_bit: false,
    };

    loop {
        h += 1;
        if h > 4 * n as u32 + 8 {
            return Err(Error::corrupt("merge did not reach a fixpoint"));
        }
        let mark_cur: u8 = if h % 2 == 0 { 2 } else { 1 };
        let mark_prev: u8 = 3 - mark_cur;
        // rows fed from skipped ranges are not rewritten this pass
        z_cur.copy_from(&z_prev);
        let mut f = inputs.f_init.clone();
        block_id.fill(-1);
        let mut id: i64 = 0;
        let mut cur = [0usize; 2];
        let mut active: u64 = 0;
        let mut unresolved = false;
        let mut watched: usize = 0;
        let mut rec_idx = 0usize;
        next_records.clear();
        acc.start = 0;
        acc.len = 0;
        acc.monochrome = true;
        for &c in &acc.touched {
            acc.occ[c as usize] = 0;
        }
        acc.touched.clear();
        acc.r0 = 0;
        acc.r1 = 0;

        macro_rules! finalize_block {
            () => {
                if acc.len > 0 {
                    active += acc.len as u64;
                    if acc.monochrome {
                        if acc.len >= tau {
                            cpush_merged(
                                &mut next_records,
                                CSkipRecord {
                                    start: acc.start as u32,
                                    end: (acc.start + acc.len - 1) as u32,
                                    r0: acc.r0,
                                    r1: acc.r1,
                                    occ: acc.occ.clone().into_boxed_slice(),
                                    dup: None,
                                },
                            );
                        }
                    } else if acc.len == 2 && acc.r0 == 1 && acc.r1 == 1 {
                        let block = PairBlock {
                            ord0: acc.ord0,
                            ord1: acc.ord1,
                        };
                        match pair_rule(&block, h, &mut gcd_memo) {
                            PairVerdict::Identical => {
                                cpush_merged(
                                    &mut next_records,
                                    CSkipRecord {
                                        start: acc.start as u32,
                                        end: (acc.start + 1) as u32,
                                        r0: 1,
                                        r1: 1,
                                        occ: acc.occ.clone().into_boxed_slice(),
                                        dup: Some(DuplicatePair {
                                            zero_ordinal: acc.ord0,
                                            one_ordinal: acc.ord1,
                                        }),
                                    },
                                );
                            }
                            PairVerdict::Undecided => {
                                watched += 1;
                                unresolved = true;
                            }
                        }
                    } else {
                        unresolved = true;
                    }
                }
            };
        }

        let mut k = 0usize;
        while k < n {
            if rec_idx < records.len() && records[rec_idx].start as usize == k {
                finalize_block!();
                let rec = &records[rec_idx];
                cur[0] += rec.r0 as usize;
                cur[1] += rec.r1 as usize;
                for c in 0..=sigma {
                    f[c] += rec.occ[c] as u64;
                }
                k = rec.end as usize + 1;
                acc.start = k;
                acc.len = 0;
                acc.monochrome = true;
                for &c in &acc.touched {
                    acc.occ[c as usize] = 0;
                }
                acc.touched.clear();
                acc.r0 = 0;
                acc.r1 = 0;
                cpush_merged(&mut next_records, rec.clone());
                rec_idx += 1;
                continue;
            }
            let v = b2.get(k);
            if v != 0 && v != mark_cur {
                finalize_block!();
                acc.start = k;
                acc.len = 0;
                acc.monochrome = true;
                for &c in &acc.touched {
                    acc.occ[c as usize] = 0;
                }
                acc.touched.clear();
                acc.r0 = 0;
                acc.r1 = 0;
                id = k as i64;
            }
            if v == mark_prev {
                b2.set(k, 3);
            }
            let b = z_prev.get(k);
            if acc.len == 0 {
                acc.first_bit = b;
            } else if b != acc.first_bit {
                acc.monochrome = false;
            }
            if b {
                if acc.r1 == 0 {
                    acc.ord1 = cur[1];
                }
                acc.r1 += 1;
            } else {
                if acc.r0 == 0 {
                    acc.ord0 = cur[0];
                }
                acc.r0 += 1;
            }
            acc.len += 1;
            let c = inputs.symbol(b, cur[b as usize]);
            cur[b as usize] += 1;
            if acc.occ[c as usize] == 0 {
                acc.touched.push(c);
            }
            acc.occ[c as usize] += 1;
            let j = f[c as usize] as usize;
            f[c as usize] += 1;
            if block_id[c as usize] != id {
                block_id[c as usize] = id;
                if b2.get(j) == 0 {
                    b2.set(j, mark_cur);
                }
            }
            z_cur.set(j, b);
            k += 1;
        }
        finalize_block!();
        if cur[0] != inputs.c0.len() || cur[1] != inputs.c1.len() {
            return Err(Error::corrupt("inputs not fully consumed"));
        }

        std::mem::swap(&mut records, &mut next_records);
        report.iterations += 1;
        report.active_per_iteration.push(active);
        let live = records.len() + watched;
        report.peak_irrelevant_records = report.peak_irrelevant_records.max(live);
        report.peak_irrelevant_bytes = report
            .peak_irrelevant_bytes
            .max(records.len() * crecord_bytes(sigma) + watched * QUASI_BLOCK_BYTES);
        std::mem::swap(&mut z_prev, &mut z_cur);
        if !unresolved {
            break;
        }
    }

    let mut drop_pos = vec![false; n];
    let mut duplicates: Vec<DuplicatePair> = Vec::new();
    for rec in &records {
        if let Some(pair) = rec.dup {
            drop_pos[rec.end as usize] = true;
            duplicates.push(pair);
        }
    }
    duplicates.sort_by_key(|p| p.zero_ordinal);
    Ok(GapRunResult {
        z: z_prev,
        drop_pos,
        duplicates,
        report,
    })
}

pub struct PermutermOutput {
    pub merged: Cbwt,
    pub interleave: BitVec,
    pub duplicates: Vec<DuplicatePair>,
    /// Pass at which each duplicate pair was retired, aligned with
    /// `duplicates`.
    pub confirmed_at: Vec<u32>,
    pub report: MergeReport,
}

/// Stepwise permuterm merge: rows carry a saturating count of terminator
/// symbols consumed, and a two-row mixed block whose rows have both passed
/// two terminators holds two identical rotations.
pub struct PermutermMergeRun<'a> {
    inputs: CInputs<'a>,
    z_prev: BitVec,
    z_cur: BitVec,
    b2: TwoBitVec,
    /// Terminator counts per interleave position, saturating at 2. Like the
    /// interleave vector they travel with the rows, so two buffers
    /// alternate.
    m_prev: TwoBitVec,
    m_cur: TwoBitVec,
    block_id: Vec<i64>,
    tau: usize,
    records: Vec<CSkipRecord>,
    confirm_iteration: Vec<(DuplicatePair, u32)>,
    h: u32,
    done: bool,
    report: MergeReport,
}

impl<'a> PermutermMergeRun<'a> {
    pub fn new(c0: &'a Cbwt, c1: &'a Cbwt, tau: usize) -> Result<Self> {
        if c0.mode() != CircularMode::Permuterm || c1.mode() != CircularMode::Permuterm {
            return Err(Error::MissingTerminator { index: 0 });
        }
        let inputs = CInputs::new(c0, c1)?;
        let sigma = inputs.sigma;
        let tau = {
            let floor = sigma + 2;
            if tau < floor {
                log::warn!("skip threshold {tau} below {floor}, clamping up");
                floor
            } else {
                tau
            }
        };
        let n = inputs.n;
        let mut b2 = TwoBitVec::new(n + 1, 0);
        b2.set(0, 3);
        b2.set(n, 3);
        let z_prev = inputs.initial_z();
        Ok(PermutermMergeRun {
            inputs,
            z_prev,
            z_cur: BitVec::new(n, false),
            b2,
            m_prev: TwoBitVec::new(n, 0),
            m_cur: TwoBitVec::new(n, 0),
            block_id: vec![-1; sigma + 1],
            tau,
            records: Vec::new(),
            confirm_iteration: Vec::new(),
            h: 0,
            done: false,
            report: MergeReport::new_empty(),
        })
    }

    pub fn z(&self) -> &BitVec {
        &self.z_prev
    }

    pub fn iterations(&self) -> u32 {
        self.h
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Terminator count of a row after the last completed pass, by input
    /// and row ordinal.
    pub fn terminator_count(&self, input: usize, ordinal: usize) -> u8 {
        let want = input == 1;
        let mut seen = 0usize;
        for (pos, b) in self.z_prev.iter().enumerate() {
            if b == want {
                if seen == ordinal {
                    return self.m_prev.get(pos);
                }
                seen += 1;
            }
        }
        panic!("row ordinal out of range");
    }

    pub fn step(&mut self) -> Result<bool> {
        if self.done {
            return Ok(false);
        }
        self.h += 1;
        let h = self.h;
        let n = self.inputs.n;
        if h > 4 * n as u32 + 8 {
            return Err(Error::corrupt("merge did not reach a fixpoint"));
        }
        let sigma = self.inputs.sigma;
        let mark_cur: u8 = if h % 2 == 0 { 2 } else { 1 };
        let mark_prev: u8 = 3 - mark_cur;
        // rows fed from skipped ranges are not rewritten this pass; the
        // terminator counts ride along with the rows
        self.z_cur.copy_from(&self.z_prev);
        self.m_cur.copy_from(&self.m_prev);
        let mut f = self.inputs.f_init.clone();
        self.block_id.fill(-1);
        let mut id: i64 = 0;
        let mut cur = [0usize; 2];
        let mut active: u64 = 0;
        let mut unresolved = false;
        let mut rec_idx = 0usize;
        let mut next_records: Vec<CSkipRecord> = Vec::new();

        struct Acc {
            start: usize,
            len: usize,
            r0: u32,
            r1: u32,
            ord0: usize,
            ord1: usize,
            m0: u8,
            m1: u8,
            occ: Vec<u32>,
            touched: Vec<u8>,
            monochrome: bool,
            first_bit: bool,
        }
        let mut acc = Acc {
            start: 0,
            len: 0,
            r0: 0,
            r1: 0,
            ord0: 0,
            ord1: 0,
            m0: 0,
            m1: 0,
            occ: vec![0u32; sigma + 1],
            touched: Vec::new(),
            monochrome: true,
            first_bit: false,
        };

        macro_rules! reset_acc {
            ($start:expr) => {
                acc.start = $start;
                acc.len = 0;
                acc.monochrome = true;
                for &c in &acc.touched {
                    acc.occ[c as usize] = 0;
                }
                acc.touched.clear();
                acc.r0 = 0;
                acc.r1 = 0;
            };
        }

        macro_rules! finalize_block {
            () => {
                if acc.len > 0 {
                    active += acc.len as u64;
                    if acc.monochrome {
                        if acc.len >= self.tau {
                            cpush_merged(
                                &mut next_records,
                                CSkipRecord {
                                    start: acc.start as u32,
                                    end: (acc.start + acc.len - 1) as u32,
                                    r0: acc.r0,
                                    r1: acc.r1,
                                    occ: acc.occ.clone().into_boxed_slice(),
                                    dup: None,
                                },
                            );
                        }
                    } else if acc.len == 2
                        && acc.r0 == 1
                        && acc.r1 == 1
                        && acc.m0 == 2
                        && acc.m1 == 2
                    {
                        let pair = DuplicatePair {
                            zero_ordinal: acc.ord0,
                            one_ordinal: acc.ord1,
                        };
                        self.confirm_iteration.push((pair, h));
                        cpush_merged(
                            &mut next_records,
                            CSkipRecord {
                                start: acc.start as u32,
                                end: (acc.start + 1) as u32,
                                r0: 1,
                                r1: 1,
                                occ: acc.occ.clone().into_boxed_slice(),
                                dup: Some(pair),
                            },
                        );
                    } else {
                        unresolved = true;
                    }
                }
            };
        }

        let mut k = 0usize;
        while k < n {
            if rec_idx < self.records.len() && self.records[rec_idx].start as usize == k {
                finalize_block!();
                let rec = &self.records[rec_idx];
                cur[0] += rec.r0 as usize;
                cur[1] += rec.r1 as usize;
                for c in 0..=sigma {
                    f[c] += rec.occ[c] as u64;
                }
                k = rec.end as usize + 1;
                reset_acc!(k);
                let rec = rec.clone();
                cpush_merged(&mut next_records, rec);
                rec_idx += 1;
                continue;
            }
            let v = self.b2.get(k);
            if v != 0 && v != mark_cur {
                finalize_block!();
                reset_acc!(k);
                id = k as i64;
            }
            if v == mark_prev {
                self.b2.set(k, 3);
            }
            let b = self.z_prev.get(k);
            let m = self.m_prev.get(k);
            if acc.len == 0 {
                acc.first_bit = b;
            } else if b != acc.first_bit {
                acc.monochrome = false;
            }
            if b {
                if acc.r1 == 0 {
                    acc.ord1 = cur[1];
                    acc.m1 = m;
                }
                acc.r1 += 1;
            } else {
                if acc.r0 == 0 {
                    acc.ord0 = cur[0];
                    acc.m0 = m;
                }
                acc.r0 += 1;
            }
            acc.len += 1;
            let c = self.inputs.symbol(b, cur[b as usize]);
            cur[b as usize] += 1;
            if acc.occ[c as usize] == 0 {
                acc.touched.push(c);
            }
            acc.occ[c as usize] += 1;
            let j = f[c as usize] as usize;
            f[c as usize] += 1;
            if self.block_id[c as usize] != id {
                self.block_id[c as usize] = id;
                if self.b2.get(j) == 0 {
                    self.b2.set(j, mark_cur);
                }
            }
            self.z_cur.set(j, b);
            self.m_cur
                .set(j, if c == 0 && m < 2 { m + 1 } else { m });
            k += 1;
        }
        finalize_block!();
        if cur[0] != self.inputs.c0.len() || cur[1] != self.inputs.c1.len() {
            return Err(Error::corrupt("inputs not fully consumed"));
        }

        self.records = next_records;
        self.report.iterations += 1;
        self.report.active_per_iteration.push(active);
        self.report.peak_irrelevant_records =
            self.report.peak_irrelevant_records.max(self.records.len());
        self.report.peak_irrelevant_bytes = self
            .report
            .peak_irrelevant_bytes
            .max(self.records.len() * crecord_bytes(sigma));
        std::mem::swap(&mut self.z_prev, &mut self.z_cur);
        std::mem::swap(&mut self.m_prev, &mut self.m_cur);
        self.done = !unresolved;
        Ok(!self.done)
    }

    pub fn finish(mut self) -> Result<PermutermOutput> {
        while self.step()? {}
        let n = self.inputs.n;
        let mut drop_pos = vec![false; n];
        let mut pairs = self.confirm_iteration;
        pairs.sort_by_key(|(p, _)| p.zero_ordinal);
        for rec in &self.records {
            if rec.dup.is_some() {
                drop_pos[rec.end as usize] = true;
            }
        }
        let merged = apply_dedup(&self.z_prev, &drop_pos, self.inputs.c0, self.inputs.c1)?;
        Ok(PermutermOutput {
            merged,
            interleave: self.z_prev,
            duplicates: pairs.iter().map(|&(p, _)| p).collect(),
            confirmed_at: pairs.iter().map(|&(_, h)| h).collect(),
            report: self.report,
        })
    }
}

/// Permuterm merge run to completion.
pub fn permuterm_merge(c0: &Cbwt, c1: &Cbwt, tau: usize) -> Result<PermutermOutput> {
    PermutermMergeRun::new(c0, c1, tau)?.finish()
}

/// Max and average circular LCP of a collection, via the enumeration
/// builder.
pub fn clcp_stats(
    coll: &crate::alphabet::StringCollection,
    mode: CircularMode,
) -> Result<AggregateStat> {
    let clcp = oracle::clcp_build(coll, mode)?;
    Ok(crate::index::lcp_stats(&clcp))
}
