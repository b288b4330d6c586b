//! Merging two trie transforms.
//!
//! A trie is stored as its internal-node groups sorted by upward path: a
//! label array holding each group's outgoing edge labels and a bit array
//! marking group ends. Merging interleaves the groups of both inputs by
//! upward-path order; equal paths are detected through a boundary entry
//! that never gets set and the two groups fuse into one output group.

use crate::bits::{BitVec, TwoBitVec};
use crate::error::{Error, Result};
use crate::merge_bwt::MergeReport;

/// Two-array trie representation: `labels[i]` is an outgoing edge label of
/// some internal node, `last[i]` marks the final label of each node's
/// group. Groups appear in the lexicographic order of the nodes' upward
/// paths; the terminator label is 0.
#[derive(Clone, PartialEq, Eq)]
pub struct Xbwt {
    last: BitVec,
    labels: Vec<u8>,
    node_count: usize,
    sigma: u8,
}

impl Xbwt {
    pub fn new(last: BitVec, labels: Vec<u8>, sigma: u8) -> Result<Self> {
        if labels.is_empty() || last.len() != labels.len() {
            return Err(Error::corrupt("label and group-end arrays do not align"));
        }
        let m = labels.len();
        if !last.get(m - 1) {
            return Err(Error::corrupt("final group is unterminated"));
        }
        if labels.iter().any(|&c| c > sigma) {
            return Err(Error::corrupt(format!("label above sigma={sigma}")));
        }
        let mut node_count = 0usize;
        let mut group_start = 0usize;
        for i in 0..m {
            if i > group_start && labels[i - 1] >= labels[i] {
                return Err(Error::corrupt("group labels must strictly increase"));
            }
            if last.get(i) {
                node_count += 1;
                group_start = i + 1;
            }
        }
        let terminators = labels.iter().filter(|&&c| c == 0).count();
        if terminators != m + 1 - node_count {
            return Err(Error::corrupt(format!(
                "{terminators} terminator labels in a trie of {m} edges and {node_count} internal nodes"
            )));
        }
        Ok(Xbwt {
            last,
            labels,
            node_count,
            sigma,
        })
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn last(&self) -> &BitVec {
        &self.last
    }

    pub fn last_bits(&self) -> Vec<bool> {
        self.last.iter().collect()
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of internal nodes (= groups).
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn terminator_count(&self) -> usize {
        self.labels.iter().filter(|&&c| c == 0).count()
    }

    pub fn sigma(&self) -> u8 {
        self.sigma
    }

    /// The label slice of each group in order.
    pub fn groups(&self) -> impl Iterator<Item = &[u8]> + '_ {
        let mut start = 0usize;
        (0..self.labels.len()).filter_map(move |i| {
            if self.last.get(i) {
                let g = &self.labels[start..=i];
                start = i + 1;
                Some(g)
            } else {
                None
            }
        })
    }

    /// Ordinary-label occurrence counts, index 0 counting terminators.
    fn label_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.sigma as usize + 1];
        for &c in &self.labels {
            counts[c as usize] += 1;
        }
        counts
    }
}

impl std::fmt::Debug for Xbwt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Xbwt(edges={}, nodes={}, sigma={})",
            self.labels.len(),
            self.node_count,
            self.sigma
        )
    }
}

/// Stepwise merge of two trie transforms.
///
/// Each pass consumes one whole group per interleave entry; ordinary labels
/// route a copy of the entry's bit, terminator labels only advance the
/// cursor. The first two entries always stand for the two root groups
/// (empty upward paths). A 2-bit boundary array records, write once, when
/// neighbouring entries were first told apart; entries still unmarked when
/// the run quiesces identify equal upward paths.
pub struct XbwtMergeRun<'a> {
    x0: &'a Xbwt,
    x1: &'a Xbwt,
    f_init: Vec<u64>,
    n: usize,
    z_prev: BitVec,
    z_cur: BitVec,
    b2: TwoBitVec,
    block_id: Vec<i64>,
    h: u32,
    quiescent: bool,
    report: MergeReport,
}

impl<'a> XbwtMergeRun<'a> {
    pub fn new(x0: &'a Xbwt, x1: &'a Xbwt) -> Result<Self> {
        if x0.sigma() != x1.sigma() {
            return Err(Error::AlphabetMismatch {
                left: x0.sigma(),
                right: x1.sigma(),
            });
        }
        let sigma = x0.sigma() as usize;
        let n0 = x0.node_count();
        let n1 = x1.node_count();
        let n = n0 + n1;
        let mut counts = x0.label_counts();
        for (c, v) in x1.label_counts().into_iter().enumerate() {
            counts[c] += v;
        }
        // first destination per ordinary symbol: two slots for the root
        // entries, then the smaller ordinary labels (terminators are never
        // routed)
        let mut f_init = vec![0u64; sigma + 1];
        let mut acc = 2u64;
        for c in 1..=sigma {
            f_init[c] = acc;
            acc += counts[c];
        }
        // all first-input entries precede all second-input entries at the
        // start; starting with the root pair interleaved instead would place
        // the second root's children ahead of first-input nodes that sort
        // below them
        let mut z_prev = BitVec::new(n, false);
        for i in n0..n {
            z_prev.set(i, true);
        }
        let mut b2 = TwoBitVec::new(n + 1, 0);
        b2.set(0, 3);
        b2.set(n, 3);
        Ok(XbwtMergeRun {
            x0,
            x1,
            f_init,
            n,
            z_prev,
            z_cur: BitVec::new(n, false),
            b2,
            block_id: vec![-1; sigma + 1],
            h: 0,
            quiescent: false,
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
        self.quiescent
    }

    /// Entries whose upward path equals the preceding entry's: boundary
    /// positions never marked. Index `p` refers to the pair `(p - 1, p)`.
    pub fn fuse_marks(&self) -> Vec<bool> {
        (0..=self.n).map(|p| self.b2.get(p) == 0).collect()
    }

    /// Runs one pass; returns false once neither the interleave vector nor
    /// the boundary array changed.
    pub fn step(&mut self) -> Result<bool> {
        if self.quiescent {
            return Ok(false);
        }
        self.h += 1;
        let h = self.h;
        if h as usize > 2 * (self.n + self.x0.len() + self.x1.len()) + 8 {
            return Err(Error::corrupt("merge did not reach a fixpoint"));
        }
        let mark_cur: u8 = if h % 2 == 0 { 2 } else { 1 };
        let mark_prev: u8 = 3 - mark_cur;
        let mut f = self.f_init.clone();
        self.block_id.fill(-1);
        let mut id: i64 = 0;
        let mut cur = [0usize; 2];
        let mut writes = 0usize;
        self.z_cur.set(0, false);
        self.z_cur.set(1, true);
        for k in 0..self.n {
            let v = self.b2.get(k);
            if v != 0 && v != mark_cur {
                id = k as i64;
            }
            if v == mark_prev {
                self.b2.set(k, 3);
            }
            let b = self.z_prev.get(k);
            let x = if b { self.x1 } else { self.x0 };
            loop {
                let pos = cur[b as usize];
                if pos >= x.len() {
                    return Err(Error::corrupt("group cursor overran its input"));
                }
                let c = x.labels()[pos];
                let is_last = x.last().get(pos);
                cur[b as usize] += 1;
                if c != 0 {
                    let j = f[c as usize] as usize;
                    f[c as usize] += 1;
                    if self.block_id[c as usize] != id {
                        self.block_id[c as usize] = id;
                        if self.b2.get(j) == 0 {
                            self.b2.set(j, mark_cur);
                            writes += 1;
                        }
                    }
                    self.z_cur.set(j, b);
                }
                if is_last {
                    break;
                }
            }
        }
        if cur[0] != self.x0.len() || cur[1] != self.x1.len() {
            return Err(Error::corrupt("inputs not fully consumed"));
        }
        let changed = self.z_cur != self.z_prev;
        std::mem::swap(&mut self.z_prev, &mut self.z_cur);
        self.report.iterations += 1;
        self.report.active_per_iteration.push(self.n as u64);
        self.quiescent = !changed && writes == 0;
        Ok(!self.quiescent)
    }

    pub fn finish(mut self) -> Result<(Xbwt, MergeReport)> {
        while self.step()? {}
        let merged = fuse_groups(&self.z_prev, &self.fuse_marks(), self.x0, self.x1)?;
        Ok((merged, self.report))
    }
}

/// Produces the merged transform from a stable interleave vector and the
/// fuse marks: unmarked entries copy their group, a marked entry fuses
/// with its predecessor into the sorted union of the two label sets.
pub fn fuse_groups(z: &BitVec, fuse_marks: &[bool], x0: &Xbwt, x1: &Xbwt) -> Result<Xbwt> {
    let n = x0.node_count() + x1.node_count();
    if z.len() != n || fuse_marks.len() != n + 1 {
        return Err(Error::corrupt("interleave or mark vector of wrong length"));
    }
    if fuse_marks[0] {
        return Err(Error::corrupt("fuse mark before the first entry"));
    }
    let groups0: Vec<&[u8]> = x0.groups().collect();
    let groups1: Vec<&[u8]> = x1.groups().collect();
    let mut ord = [0usize; 2];
    let mut row_groups: Vec<&[u8]> = Vec::with_capacity(n);
    for bit in z.iter() {
        let b = bit as usize;
        let groups = if bit { &groups1 } else { &groups0 };
        row_groups.push(
            groups
                .get(ord[b])
                .ok_or_else(|| Error::corrupt("more entries than input groups"))?,
        );
        ord[b] += 1;
    }
    let mut labels = Vec::with_capacity(x0.len() + x1.len());
    let mut last = Vec::with_capacity(x0.len() + x1.len());
    let mut p = 0usize;
    while p < n {
        let fused = p + 1 < n && fuse_marks[p + 1];
        let group: Vec<u8> = if fused {
            if fuse_marks[p + 2] {
                return Err(Error::corrupt("three entries share one upward path"));
            }
            if z.get(p) || !z.get(p + 1) {
                return Err(Error::corrupt(
                    "fused entries must come from opposite inputs, first one first",
                ));
            }
            sorted_union(row_groups[p], row_groups[p + 1])
        } else {
            row_groups[p].to_vec()
        };
        for (i, &c) in group.iter().enumerate() {
            labels.push(c);
            last.push(i + 1 == group.len());
        }
        p += if fused { 2 } else { 1 };
    }
    Xbwt::new(last.into_iter().collect(), labels, x0.sigma())
}

fn sorted_union(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                out.push(x);
                i += 1;
                j += 1;
            }
            (Some(&x), Some(&y)) if x < y => {
                out.push(x);
                i += 1;
            }
            (Some(_), Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (Some(&x), None) => {
                out.push(x);
                i += 1;
            }
            (None, Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Merge run to completion.
pub fn xbwt_hm_merge(x0: &Xbwt, x1: &Xbwt) -> Result<(Xbwt, MergeReport)> {
    XbwtMergeRun::new(x0, x1)?.finish()
}

/// A skipped range of settled entries with its replay deltas.
#[derive(Clone, Debug)]
struct XSkipRecord {
    start: u32,
    end: u32, // inclusive, in entries
    labels0: u32,
    labels1: u32,
    occ: Box<[u32]>,
}

fn xrecord_bytes(sigma: usize) -> usize {
    16 + (sigma + 1) * 4
}

fn xpush_merged(records: &mut Vec<XSkipRecord>, rec: XSkipRecord) {
    if let Some(tail) = records.last_mut() {
        if tail.end + 1 == rec.start {
            tail.end = rec.end;
            tail.labels0 += rec.labels0;
            tail.labels1 += rec.labels1;
            for (a, b) in tail.occ.iter_mut().zip(rec.occ.iter()) {
                *a += b;
            }
            return;
        }
    }
    records.push(rec);
}

/// Merge with skipping of settled ranges.
///
/// A second 2-bit array, double-buffered like the interleave vector,
/// tracks per entry whether its upward path has turned out shorter than
/// the pass depth: 0 while unknown, 1 the pass after the parent settled
/// (the entry routes its children's marks once, "firing"), 3 afterwards.
/// The state rides along when the parent routes the entry, because an
/// entry can move once more after being marked: a marked second-input
/// entry still swaps past a longer first-input entry sharing its prefix.
/// Maximal runs of old entries at least `tau` long become skip records.
pub fn xbwt_gap_merge(x0: &Xbwt, x1: &Xbwt, tau: usize) -> Result<(Xbwt, MergeReport)> {
    let mut run = XbwtMergeRun::new(x0, x1)?;
    let sigma = x0.sigma() as usize;
    let tau = {
        let floor = sigma + 2;
        if tau < floor {
            log::warn!("skip threshold {tau} below {floor}, clamping up");
            floor
        } else {
            tau
        }
    };
    let n = run.n;
    let mut c_prev = TwoBitVec::new(n, 0);
    let mut c_cur = TwoBitVec::new(n, 0);
    // in the initial vector the second root still sits at n0; both roots
    // fire in the first pass
    let root1_pos = x0.node_count();
    let mut records: Vec<XSkipRecord> = Vec::new();
    let mut next_records: Vec<XSkipRecord> = Vec::new();
    let mut report = MergeReport::new_empty();
    let mut h: u32 = 0;

    loop {
        h += 1;
        if h as usize > 2 * (n + x0.len() + x1.len()) + 8 {
            return Err(Error::corrupt("merge did not reach a fixpoint"));
        }
        let mark_cur: u8 = if h % 2 == 0 { 2 } else { 1 };
        let mark_prev: u8 = 3 - mark_cur;
        // rows fed from skipped ranges are not rewritten this pass
        run.z_cur.copy_from(&run.z_prev);
        c_cur.copy_from(&c_prev);
        c_cur.set(0, 3);
        c_cur.set(1, 3);
        let mut f = run.f_init.clone();
        run.block_id.fill(-1);
        let mut id: i64 = 0;
        let mut cur = [0usize; 2];
        let mut active: u64 = 0;
        let mut unresolved = false;
        let mut rec_idx = 0usize;
        next_records.clear();
        // run of consecutive already-old entries eligible for recording
        let mut old_start: usize = 0;
        let mut old_len: usize = 0;
        let mut old_labels = [0u32; 2];
        let mut old_occ = vec![0u32; sigma + 1];
        let mut old_touched: Vec<u8> = Vec::new();
        run.z_cur.set(0, false);
        run.z_cur.set(1, true);

        macro_rules! flush_old_run {
            () => {
                if old_len >= tau {
                    xpush_merged(
                        &mut next_records,
                        XSkipRecord {
                            start: old_start as u32,
                            end: (old_start + old_len - 1) as u32,
                            labels0: old_labels[0],
                            labels1: old_labels[1],
                            occ: old_occ.clone().into_boxed_slice(),
                        },
                    );
                }
                #[allow(unused_assignments)]
                {
                    old_len = 0;
                    old_labels = [0, 0];
                }
                for &c in &old_touched {
                    old_occ[c as usize] = 0;
                }
                old_touched.clear();
            };
        }

        let mut k = 0usize;
        while k < n {
            if rec_idx < records.len() && records[rec_idx].start as usize == k {
                flush_old_run!();
                let rec = &records[rec_idx];
                cur[0] += rec.labels0 as usize;
                cur[1] += rec.labels1 as usize;
                for c in 1..=sigma {
                    f[c] += rec.occ[c] as u64;
                }
                k = rec.end as usize + 1;
                old_start = k;
                xpush_merged(&mut next_records, rec.clone());
                rec_idx += 1;
                continue;
            }
            let v = run.b2.get(k);
            if v != 0 && v != mark_cur {
                id = k as i64;
            }
            if v == mark_prev {
                run.b2.set(k, 3);
            }
            let state = c_prev.get(k);
            let fires = if h == 1 {
                k == 0 || k == root1_pos
            } else {
                state == 1
            };
            let old = state == 3;
            if old {
                if old_len == 0 {
                    old_start = k;
                }
                old_len += 1;
            } else {
                flush_old_run!();
                old_start = k + 1;
                unresolved = true;
            }
            // what the routed children become next pass
            let child_state: u8 = if fires {
                1
            } else if old {
                3
            } else {
                0
            };
            let b = run.z_prev.get(k);
            let x = if b { run.x1 } else { run.x0 };
            let mut consumed = 0u32;
            loop {
                let pos = cur[b as usize];
                if pos >= x.len() {
                    return Err(Error::corrupt("group cursor overran its input"));
                }
                let c = x.labels()[pos];
                let is_last = x.last().get(pos);
                cur[b as usize] += 1;
                consumed += 1;
                if c != 0 {
                    let j = f[c as usize] as usize;
                    f[c as usize] += 1;
                    if run.block_id[c as usize] != id {
                        run.block_id[c as usize] = id;
                        if run.b2.get(j) == 0 {
                            run.b2.set(j, mark_cur);
                        }
                    }
                    run.z_cur.set(j, b);
                    c_cur.set(j, child_state);
                }
                if old {
                    if old_occ[c as usize] == 0 {
                        old_touched.push(c);
                    }
                    old_occ[c as usize] += 1;
                }
                if is_last {
                    break;
                }
            }
            if old {
                old_labels[b as usize] += consumed;
            }
            active += 1;
            k += 1;
        }
        flush_old_run!();
        if cur[0] != x0.len() || cur[1] != x1.len() {
            return Err(Error::corrupt("inputs not fully consumed"));
        }

        std::mem::swap(&mut records, &mut next_records);
        report.iterations += 1;
        report.active_per_iteration.push(active);
        report.peak_irrelevant_records = report.peak_irrelevant_records.max(records.len());
        report.peak_irrelevant_bytes = report
            .peak_irrelevant_bytes
            .max(records.len() * xrecord_bytes(sigma));
        std::mem::swap(&mut run.z_prev, &mut run.z_cur);
        std::mem::swap(&mut c_prev, &mut c_cur);
        if !unresolved {
            break;
        }
    }

    let merged = fuse_groups(&run.z_prev, &run.fuse_marks(), x0, x1)?;
    Ok((merged, report))
}
