//! Merging two multi-string BWTs by iterative context refinement.
//!
//! All engines here share one scheme: a bit vector distributes the rows of
//! the two inputs, and each iteration re-sorts it by one more context
//! symbol using a counting pass. An integer boundary array records, write
//! once, the iteration at which neighbouring rows were first told apart;
//! its entries are exactly the neighbouring LCP values plus one. The
//! skipping variants stop touching ranges whose content can no longer
//! change and replay their counter effects from compact records instead.

use crate::bits::{BitVec, TwoBitVec};
use crate::error::{Error, Result};
use crate::index::{LcpArray, MultiBwt};

/// Diagnostics of a merge run.
#[derive(Clone, Debug, serde::Serialize)]
pub struct MergeReport {
    /// Number of refinement passes executed.
    pub iterations: u32,
    /// Positions processed (not skipped) in each pass.
    pub active_per_iteration: Vec<u64>,
    /// Most skip records alive at once.
    pub peak_irrelevant_records: usize,
    /// Their storage at that moment, in bytes.
    pub peak_irrelevant_bytes: usize,
}

impl MergeReport {
    pub(crate) fn new_empty() -> Self {
        MergeReport {
            iterations: 0,
            active_per_iteration: Vec::new(),
            peak_irrelevant_records: 0,
            peak_irrelevant_bytes: 0,
        }
    }

    pub fn total_active(&self) -> u64 {
        self.active_per_iteration.iter().sum()
    }
}

/// One entry of the emitted boundary stream: the interior boundary `index`
/// (in `1..n`) was first written during iteration `value + 1`, i.e. the LCP
/// between rows `index - 1` and `index` is `value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LcpPair {
    pub index: u64,
    pub value: u32,
}

/// Stable interleave of two transforms: the i-th 0 of `z` pulls the i-th
/// row of `bwt0`, the j-th 1 the j-th row of `bwt1`. Sentinel ids of the
/// second input are shifted past those of the first.
pub fn interleave_apply(z: &BitVec, bwt0: &MultiBwt, bwt1: &MultiBwt) -> Result<MultiBwt> {
    if z.len() != bwt0.len() + bwt1.len() || z.count_zeros() != bwt0.len() {
        return Err(Error::corrupt("interleave vector does not match inputs"));
    }
    if bwt0.sigma() != bwt1.sigma() {
        return Err(Error::AlphabetMismatch {
            left: bwt0.sigma(),
            right: bwt1.sigma(),
        });
    }
    let k0 = bwt0.doc_count() as u32;
    let mut symbols = Vec::with_capacity(z.len());
    let mut sentinel_ids = Vec::with_capacity(bwt0.doc_count() + bwt1.doc_count());
    let mut cur = [0usize; 2];
    let mut sent = [0usize; 2];
    for bit in z.iter() {
        let b = bit as usize;
        let input = if b == 0 { bwt0 } else { bwt1 };
        let s = input.symbols()[cur[b]];
        cur[b] += 1;
        symbols.push(s);
        if s == 0 {
            let id = input.sentinel_ids()[sent[b]];
            sent[b] += 1;
            sentinel_ids.push(if b == 0 { id } else { id + k0 });
        }
    }
    MultiBwt::new(symbols, sentinel_ids, bwt0.sigma())
}

/// Immutable per-run facts shared by every engine variant.
struct Inputs<'a> {
    bwt0: &'a MultiBwt,
    bwt1: &'a MultiBwt,
    sigma: usize,
    k0_docs: u32,
    /// First destination of each ordinary symbol: the number of smaller
    /// symbols in both inputs (terminators included).
    f_init: Vec<u64>,
    n: usize,
}

impl<'a> Inputs<'a> {
    fn new(bwt0: &'a MultiBwt, bwt1: &'a MultiBwt) -> Result<Self> {
        if bwt0.sigma() != bwt1.sigma() {
            return Err(Error::AlphabetMismatch {
                left: bwt0.sigma(),
                right: bwt1.sigma(),
            });
        }
        let sigma = bwt0.sigma() as usize;
        let mut counts = bwt0.symbol_counts();
        for (c, v) in bwt1.symbol_counts().into_iter().enumerate() {
            counts[c] += v;
        }
        let mut f_init = vec![0u64; sigma + 1];
        let mut acc = 0u64;
        for c in 0..=sigma {
            f_init[c] = acc;
            acc += counts[c];
        }
        Ok(Inputs {
            bwt0,
            bwt1,
            sigma,
            k0_docs: bwt0.doc_count() as u32,
            f_init,
            n: bwt0.len() + bwt1.len(),
        })
    }

    #[inline]
    fn symbol(&self, b: bool, pos: usize) -> u8 {
        if b {
            self.bwt1.symbols()[pos]
        } else {
            self.bwt0.symbols()[pos]
        }
    }

    /// Global row of a terminator: all of input 0's documents precede input
    /// 1's, each side keeping its own document order.
    #[inline]
    fn sentinel_row(&self, b: bool, sent_pos: usize) -> usize {
        if b {
            (self.bwt1.sentinel_ids()[sent_pos] + self.k0_docs) as usize
        } else {
            self.bwt0.sentinel_ids()[sent_pos] as usize
        }
    }

    fn initial_z(&self) -> BitVec {
        let mut z = BitVec::new(self.n, false);
        for i in self.bwt0.len()..self.n {
            z.set(i, true);
        }
        z
    }
}

fn iteration_cap(n: usize) -> u32 {
    2 * n as u32 + 8
}

/// Plain merge without boundary tracking: refine until the interleave
/// vector reaches its fixpoint.
pub fn hm_merge(bwt0: &MultiBwt, bwt1: &MultiBwt) -> Result<(BitVec, MultiBwt, MergeReport)> {
    let inputs = Inputs::new(bwt0, bwt1)?;
    let mut z_prev = inputs.initial_z();
    let mut z_cur = BitVec::new(inputs.n, false);
    let mut report = MergeReport::new_empty();
    loop {
        let mut f = inputs.f_init.clone();
        let mut cur = [0usize; 2];
        let mut sent = [0usize; 2];
        for k in 0..inputs.n {
            let b = z_prev.get(k);
            let c = inputs.symbol(b, cur[b as usize]);
            cur[b as usize] += 1;
            let j = if c == 0 {
                let row = inputs.sentinel_row(b, sent[b as usize]);
                sent[b as usize] += 1;
                row
            } else {
                let j = f[c as usize] as usize;
                f[c as usize] += 1;
                j
            };
            z_cur.set(j, b);
        }
        report.iterations += 1;
        report.active_per_iteration.push(inputs.n as u64);
        if z_cur == z_prev {
            break;
        }
        std::mem::swap(&mut z_prev, &mut z_cur);
        if report.iterations > iteration_cap(inputs.n) {
            return Err(Error::corrupt("merge did not reach a fixpoint"));
        }
    }
    let merged = interleave_apply(&z_cur, bwt0, bwt1)?;
    Ok((z_cur, merged, report))
}

/// Stepwise merge with boundary tracking; computes the merged transform and
/// its LCP array. Exposed as a struct so the per-iteration state can be
/// inspected.
pub struct LcpMergeRun<'a> {
    inputs: Inputs<'a>,
    z_prev: BitVec,
    z_cur: BitVec,
    boundaries: Vec<u32>,
    block_id: Vec<i64>,
    h: u32,
    remaining_zero: usize,
    report: MergeReport,
}

impl<'a> LcpMergeRun<'a> {
    pub fn new(bwt0: &'a MultiBwt, bwt1: &'a MultiBwt) -> Result<Self> {
        let inputs = Inputs::new(bwt0, bwt1)?;
        let n = inputs.n;
        let mut boundaries = vec![0u32; n + 1];
        boundaries[0] = 1;
        boundaries[n] = 1;
        let z_prev = inputs.initial_z();
        let sigma = inputs.sigma;
        Ok(LcpMergeRun {
            inputs,
            z_prev,
            z_cur: BitVec::new(n, false),
            boundaries,
            block_id: vec![-1; sigma + 1],
            h: 0,
            remaining_zero: n - 1,
            report: MergeReport::new_empty(),
        })
    }

    /// Interleave vector after the last completed iteration.
    pub fn z(&self) -> &BitVec {
        &self.z_prev
    }

    /// Boundary array; entry `i` is nonzero once rows `i - 1` and `i` have
    /// been told apart, and then holds their LCP plus one.
    pub fn boundaries(&self) -> &[u32] {
        &self.boundaries
    }

    pub fn iterations(&self) -> u32 {
        self.h
    }

    pub fn is_done(&self) -> bool {
        self.remaining_zero == 0
    }

    /// Runs one refinement pass. Returns false once every boundary entry is
    /// set, after which the state is final.
    pub fn step(&mut self) -> Result<bool> {
        if self.is_done() {
            return Ok(false);
        }
        self.h += 1;
        let h = self.h;
        if h > iteration_cap(self.inputs.n) {
            return Err(Error::corrupt("merge did not reach a fixpoint"));
        }
        let mut f = self.inputs.f_init.clone();
        self.block_id.fill(-1);
        let mut id: i64 = 0;
        let mut cur = [0usize; 2];
        let mut sent = [0usize; 2];
        for k in 0..self.inputs.n {
            let bk = self.boundaries[k];
            if bk != 0 && bk != h {
                id = k as i64;
            }
            let b = self.z_prev.get(k);
            let c = self.inputs.symbol(b, cur[b as usize]);
            cur[b as usize] += 1;
            let j = if c == 0 {
                let row = self.inputs.sentinel_row(b, sent[b as usize]);
                sent[b as usize] += 1;
                // terminator rows are pairwise distinct in their first
                // symbol, so their boundaries are known immediately
                if self.boundaries[row] == 0 {
                    self.boundaries[row] = h;
                    self.remaining_zero -= 1;
                }
                row
            } else {
                let j = f[c as usize] as usize;
                f[c as usize] += 1;
                if self.block_id[c as usize] != id {
                    self.block_id[c as usize] = id;
                    if self.boundaries[j] == 0 {
                        self.boundaries[j] = h;
                        self.remaining_zero -= 1;
                    }
                }
                j
            };
            self.z_cur.set(j, b);
        }
        std::mem::swap(&mut self.z_prev, &mut self.z_cur);
        self.report.iterations += 1;
        self.report.active_per_iteration.push(self.inputs.n as u64);
        Ok(!self.is_done())
    }

    pub fn finish(mut self) -> Result<LcpMergeOutput> {
        while self.step()? {}
        let interior = self.boundaries[1..self.inputs.n]
            .iter()
            .map(|&v| v as i64 - 1)
            .collect();
        let lcp = LcpArray::from_interior(interior)?;
        let merged = interleave_apply(&self.z_prev, self.inputs.bwt0, self.inputs.bwt1)?;
        Ok(LcpMergeOutput {
            interleave: self.z_prev,
            merged,
            lcp,
            report: self.report,
        })
    }
}

pub struct LcpMergeOutput {
    pub interleave: BitVec,
    pub merged: MultiBwt,
    pub lcp: LcpArray,
    pub report: MergeReport,
}

/// Boundary-tracking merge run to completion.
pub fn hm_merge_lcp(bwt0: &MultiBwt, bwt1: &MultiBwt) -> Result<LcpMergeOutput> {
    LcpMergeRun::new(bwt0, bwt1)?.finish()
}

/// A processed range whose content is final; skipping it means replaying
/// its effect on the counters.
#[derive(Clone, Debug)]
struct SkipRecord {
    start: u32,
    end: u32, // inclusive
    r0: u32,
    r1: u32,
    sent0: u32,
    sent1: u32,
    occ: Box<[u32]>,
}

fn record_bytes(sigma: usize) -> usize {
    24 + (sigma + 1) * 4
}

fn push_merged(records: &mut Vec<SkipRecord>, rec: SkipRecord) {
    if let Some(last) = records.last_mut() {
        if last.end + 1 == rec.start {
            last.end = rec.end;
            last.r0 += rec.r0;
            last.r1 += rec.r1;
            last.sent0 += rec.sent0;
            last.sent1 += rec.sent1;
            for (a, b) in last.occ.iter_mut().zip(rec.occ.iter()) {
                *a += b;
            }
            return;
        }
    }
    records.push(rec);
}

/// Accumulates the composition of the block being scanned.
struct BlockAcc {
    start: usize,
    len: usize,
    r0: u32,
    r1: u32,
    sent0: u32,
    sent1: u32,
    occ: Vec<u32>,
    touched: Vec<u8>,
    monochrome: bool,
    first_bit: bool,
}

impl BlockAcc {
    fn new(sigma: usize) -> Self {
        BlockAcc {
            start: 0,
            len: 0,
            r0: 0,
            r1: 0,
            sent0: 0,
            sent1: 0,
            occ: vec![0; sigma + 1],
            touched: Vec::new(),
            monochrome: true,
            first_bit: false,
        }
    }

    fn reset(&mut self, start: usize) {
        self.start = start;
        self.len = 0;
        self.r0 = 0;
        self.r1 = 0;
        self.sent0 = 0;
        self.sent1 = 0;
        for &c in &self.touched {
            self.occ[c as usize] = 0;
        }
        self.touched.clear();
        self.monochrome = true;
    }

    #[inline]
    fn push(&mut self, bit: bool, symbol: u8, was_sentinel_of: Option<bool>) {
        if self.len == 0 {
            self.first_bit = bit;
        } else if bit != self.first_bit {
            self.monochrome = false;
        }
        self.len += 1;
        if bit {
            self.r1 += 1;
        } else {
            self.r0 += 1;
        }
        if self.occ[symbol as usize] == 0 {
            self.touched.push(symbol);
        }
        self.occ[symbol as usize] += 1;
        if let Some(b) = was_sentinel_of {
            if b {
                self.sent1 += 1;
            } else {
                self.sent0 += 1;
            }
        }
    }

    fn to_record(&self) -> SkipRecord {
        SkipRecord {
            start: self.start as u32,
            end: (self.start + self.len - 1) as u32,
            r0: self.r0,
            r1: self.r1,
            sent0: self.sent0,
            sent1: self.sent1,
            occ: self.occ.clone().into_boxed_slice(),
        }
    }
}

/// Accumulates a maximal run of adjacent resolved blocks. A skip record
/// may span several single-origin blocks, so the threshold applies to the
/// run, not to the individual blocks.
struct RunAcc {
    acc: BlockAcc,
}

impl RunAcc {
    fn new(sigma: usize) -> Self {
        RunAcc {
            acc: BlockAcc::new(sigma),
        }
    }

    fn clear(&mut self) {
        self.acc.reset(0);
    }

    fn absorb(&mut self, block: &BlockAcc) {
        if self.acc.len == 0 {
            self.acc.start = block.start;
        }
        debug_assert_eq!(self.acc.start + self.acc.len, block.start);
        self.acc.len += block.len;
        self.acc.r0 += block.r0;
        self.acc.r1 += block.r1;
        self.acc.sent0 += block.sent0;
        self.acc.sent1 += block.sent1;
        for &c in &block.touched {
            if self.acc.occ[c as usize] == 0 {
                self.acc.touched.push(c);
            }
            self.acc.occ[c as usize] += block.occ[c as usize];
        }
    }

    fn flush(&mut self, tau: usize, records: &mut Vec<SkipRecord>) {
        if self.acc.len >= tau {
            push_merged(records, self.acc.to_record());
        }
        self.acc.reset(0);
    }
}

/// Effective skip threshold: replaying a record costs on the order of the
/// alphabet size plus the two cursors, so smaller blocks are not worth
/// recording.
fn effective_tau(tau: usize, sigma: usize) -> usize {
    let floor = sigma + 2;
    if tau < floor {
        log::warn!("skip threshold {tau} below {floor}, clamping up");
        floor
    } else {
        tau
    }
}

pub struct GapOutput {
    pub interleave: BitVec,
    pub merged: MultiBwt,
    pub lcp: LcpArray,
    pub report: MergeReport,
}

/// Merges two transforms together with their LCP arrays, skipping ranges
/// that have become single-origin. Inside such a range consecutive rows
/// come from one input, so their LCP values are taken from that input's
/// array; everywhere else the boundary array has recorded the value.
pub fn gap_merge(
    bwt0: &MultiBwt,
    lcp0: &LcpArray,
    bwt1: &MultiBwt,
    lcp1: &LcpArray,
    tau: usize,
) -> Result<GapOutput> {
    if lcp0.n() != bwt0.len() || lcp1.n() != bwt1.len() {
        return Err(Error::corrupt("LCP array length does not match its BWT"));
    }
    let inputs = Inputs::new(bwt0, bwt1)?;
    let tau = effective_tau(tau, inputs.sigma);
    let n = inputs.n;
    let mut boundaries = vec![0u32; n + 1];
    boundaries[0] = 1;
    boundaries[n] = 1;
    let mut z_prev = inputs.initial_z();
    let mut z_cur = BitVec::new(n, false);
    let mut block_id = vec![-1i64; inputs.sigma + 1];
    let mut records: Vec<SkipRecord> = Vec::new();
    let mut next_records: Vec<SkipRecord> = Vec::new();
    let mut acc = BlockAcc::new(inputs.sigma);
    let mut report = MergeReport::new_empty();
    let mut h: u32 = 0;

    loop {
        h += 1;
        if h > iteration_cap(n) {
            return Err(Error::corrupt("merge did not reach a fixpoint"));
        }
        // rows fed from skipped ranges are not rewritten this pass, so the
        // write buffer starts as a copy of the previous pass
        z_cur.copy_from(&z_prev);
        let mut f = inputs.f_init.clone();
        block_id.fill(-1);
        let mut id: i64 = 0;
        let mut cur = [0usize; 2];
        let mut sent = [0usize; 2];
        let mut active: u64 = 0;
        let mut unresolved = false;
        let mut rec_idx = 0usize;
        next_records.clear();
        acc.reset(0);

        let finalize = |acc: &mut BlockAcc,
                            next_records: &mut Vec<SkipRecord>,
                            unresolved: &mut bool,
                            active: &mut u64| {
            if acc.len == 0 {
                return;
            }
            *active += acc.len as u64;
            if acc.monochrome {
                if acc.len >= tau {
                    push_merged(next_records, acc.to_record());
                }
            } else {
                *unresolved = true;
            }
        };

        let mut k = 0usize;
        while k < n {
            if rec_idx < records.len() && records[rec_idx].start as usize == k {
                finalize(&mut acc, &mut next_records, &mut unresolved, &mut active);
                let rec = &records[rec_idx];
                cur[0] += rec.r0 as usize;
                cur[1] += rec.r1 as usize;
                sent[0] += rec.sent0 as usize;
                sent[1] += rec.sent1 as usize;
                for c in 1..=inputs.sigma {
                    f[c] += rec.occ[c] as u64;
                }
                k = rec.end as usize + 1;
                acc.reset(k);
                push_merged(&mut next_records, rec.clone());
                rec_idx += 1;
                continue;
            }
            let bk = boundaries[k];
            if bk != 0 && bk != h {
                finalize(&mut acc, &mut next_records, &mut unresolved, &mut active);
                acc.reset(k);
                id = k as i64;
            }
            let b = z_prev.get(k);
            let c = inputs.symbol(b, cur[b as usize]);
            cur[b as usize] += 1;
            let j = if c == 0 {
                let row = inputs.sentinel_row(b, sent[b as usize]);
                sent[b as usize] += 1;
                if boundaries[row] == 0 {
                    boundaries[row] = h;
                }
                row
            } else {
                let j = f[c as usize] as usize;
                f[c as usize] += 1;
                if block_id[c as usize] != id {
                    block_id[c as usize] = id;
                    if boundaries[j] == 0 {
                        boundaries[j] = h;
                    }
                }
                j
            };
            z_cur.set(j, b);
            acc.push(b, c, (c == 0).then_some(b));
            k += 1;
        }
        finalize(&mut acc, &mut next_records, &mut unresolved, &mut active);
        debug_assert_eq!(cur[0], bwt0.len(), "input 0 cursor consistency");
        debug_assert_eq!(cur[1], bwt1.len(), "input 1 cursor consistency");

        std::mem::swap(&mut records, &mut next_records);
        report.iterations += 1;
        report.active_per_iteration.push(active);
        report.peak_irrelevant_records = report.peak_irrelevant_records.max(records.len());
        report.peak_irrelevant_bytes = report
            .peak_irrelevant_bytes
            .max(records.len() * record_bytes(inputs.sigma));
        std::mem::swap(&mut z_prev, &mut z_cur);
        if !unresolved {
            break;
        }
    }

    // final pass: boundary values where present, input LCP values inside
    // single-origin ranges
    let mut interior = Vec::with_capacity(n - 1);
    let mut ord = [0usize; 2];
    let mut prev_bit = false;
    for i in 0..n {
        let b = z_prev.get(i);
        let o = ord[b as usize];
        ord[b as usize] += 1;
        if i == 0 {
            prev_bit = b;
            continue;
        }
        let v = boundaries[i];
        if v != 0 {
            interior.push(v as i64 - 1);
        } else {
            if b != prev_bit || o == 0 {
                return Err(Error::corrupt(
                    "unresolved boundary between rows of different inputs",
                ));
            }
            let lcp_in = if b { lcp1 } else { lcp0 };
            interior.push(lcp_in.values()[o]);
        }
        prev_bit = b;
    }
    let lcp = LcpArray::from_interior(interior)?;
    let merged = interleave_apply(&z_prev, bwt0, bwt1)?;
    Ok(GapOutput {
        interleave: z_prev,
        merged,
        lcp,
        report,
    })
}

pub struct BwtOnlyOutput {
    pub interleave: BitVec,
    pub merged: MultiBwt,
    pub pairs: Option<Vec<LcpPair>>,
    pub report: MergeReport,
}

/// Merge keeping only two bits per boundary entry. The parity scheme: in an
/// even iteration a freshly set entry is written 2 and one set in the
/// previous iteration reads 1 (odd iterations swap the roles); entries two
/// or more iterations old decay to 3 when scanned.
///
/// With `emit_pairs` every first write of a boundary entry appends
/// `(index, h - 1)`; the stream then determines the whole LCP array, which
/// requires refining every range to the end, so skip records are disabled
/// and the run lasts until all entries are set.
pub fn gap_merge_bwt_only(
    bwt0: &MultiBwt,
    bwt1: &MultiBwt,
    tau: usize,
    emit_pairs: bool,
) -> Result<BwtOnlyOutput> {
    let inputs = Inputs::new(bwt0, bwt1)?;
    let tau = effective_tau(tau, inputs.sigma);
    let n = inputs.n;
    let mut b2 = TwoBitVec::new(n + 1, 0);
    b2.set(0, 3);
    b2.set(n, 3);
    let mut remaining_zero = n - 1;
    let mut z_prev = inputs.initial_z();
    let mut z_cur = BitVec::new(n, false);
    let mut block_id = vec![-1i64; inputs.sigma + 1];
    let mut records: Vec<SkipRecord> = Vec::new();
    let mut next_records: Vec<SkipRecord> = Vec::new();
    let mut acc = BlockAcc::new(inputs.sigma);
    let mut pairs = emit_pairs.then(Vec::new);
    let mut report = MergeReport::new_empty();
    let mut h: u32 = 0;

    loop {
        h += 1;
        if h > iteration_cap(n) {
            return Err(Error::corrupt("merge did not reach a fixpoint"));
        }
        let mark_cur: u8 = if h % 2 == 0 { 2 } else { 1 };
        let mark_prev: u8 = 3 - mark_cur;
        z_cur.copy_from(&z_prev);
        let mut f = inputs.f_init.clone();
        block_id.fill(-1);
        let mut id: i64 = 0;
        let mut cur = [0usize; 2];
        let mut sent = [0usize; 2];
        let mut active: u64 = 0;
        let mut unresolved = false;
        let mut rec_idx = 0usize;
        next_records.clear();
        acc.reset(0);

        let finalize = |acc: &mut BlockAcc,
                            next_records: &mut Vec<SkipRecord>,
                            unresolved: &mut bool,
                            active: &mut u64| {
            if acc.len == 0 {
                return;
            }
            *active += acc.len as u64;
            if acc.monochrome {
                if !emit_pairs && acc.len >= tau {
                    push_merged(next_records, acc.to_record());
                }
            } else {
                *unresolved = true;
            }
        };

        let write_mark = |b2: &mut TwoBitVec,
                              pairs: &mut Option<Vec<LcpPair>>,
                              remaining_zero: &mut usize,
                              j: usize| {
            if b2.get(j) == 0 {
                b2.set(j, mark_cur);
                *remaining_zero -= 1;
                if let Some(p) = pairs.as_mut() {
                    p.push(LcpPair {
                        index: j as u64,
                        value: h - 1,
                    });
                }
            }
        };

        let mut k = 0usize;
        while k < n {
            if rec_idx < records.len() && records[rec_idx].start as usize == k {
                finalize(&mut acc, &mut next_records, &mut unresolved, &mut active);
                let rec = &records[rec_idx];
                cur[0] += rec.r0 as usize;
                cur[1] += rec.r1 as usize;
                sent[0] += rec.sent0 as usize;
                sent[1] += rec.sent1 as usize;
                for c in 1..=inputs.sigma {
                    f[c] += rec.occ[c] as u64;
                }
                k = rec.end as usize + 1;
                acc.reset(k);
                push_merged(&mut next_records, rec.clone());
                rec_idx += 1;
                continue;
            }
            let v = b2.get(k);
            if v != 0 && v != mark_cur {
                finalize(&mut acc, &mut next_records, &mut unresolved, &mut active);
                acc.reset(k);
                id = k as i64;
            }
            if v == mark_prev {
                // seen once as a fresh boundary; decays to plain "old"
                b2.set(k, 3);
            }
            let b = z_prev.get(k);
            let c = inputs.symbol(b, cur[b as usize]);
            cur[b as usize] += 1;
            let j = if c == 0 {
                let row = inputs.sentinel_row(b, sent[b as usize]);
                sent[b as usize] += 1;
                write_mark(&mut b2, &mut pairs, &mut remaining_zero, row);
                row
            } else {
                let j = f[c as usize] as usize;
                f[c as usize] += 1;
                if block_id[c as usize] != id {
                    block_id[c as usize] = id;
                    write_mark(&mut b2, &mut pairs, &mut remaining_zero, j);
                }
                j
            };
            z_cur.set(j, b);
            acc.push(b, c, (c == 0).then_some(b));
            k += 1;
        }
        finalize(&mut acc, &mut next_records, &mut unresolved, &mut active);

        std::mem::swap(&mut records, &mut next_records);
        report.iterations += 1;
        report.active_per_iteration.push(active);
        report.peak_irrelevant_records = report.peak_irrelevant_records.max(records.len());
        report.peak_irrelevant_bytes = report
            .peak_irrelevant_bytes
            .max(records.len() * record_bytes(inputs.sigma));
        std::mem::swap(&mut z_prev, &mut z_cur);
        let done = if emit_pairs {
            remaining_zero == 0
        } else {
            !unresolved
        };
        if done {
            break;
        }
    }

    let merged = interleave_apply(&z_prev, bwt0, bwt1)?;
    Ok(BwtOnlyOutput {
        interleave: z_prev,
        merged,
        pairs,
        report,
    })
}

/// Rebuilds an LCP array from an emitted boundary stream for an index of
/// length `n`. Exactly one pair per interior boundary is required.
pub fn reconstruct_lcp(pairs: &[LcpPair], n: usize) -> Result<LcpArray> {
    let mut interior: Vec<Option<i64>> = vec![None; n.saturating_sub(1)];
    for p in pairs {
        if p.index == 0 || p.index >= n as u64 {
            return Err(Error::PairStreamRange { index: p.index, n });
        }
        let slot = &mut interior[p.index as usize - 1];
        if slot.is_some() {
            return Err(Error::PairStreamDuplicate { index: p.index });
        }
        *slot = Some(p.value as i64);
    }
    let values = interior
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or(Error::PairStreamMissing { index: i as u64 + 1 }))
        .collect::<Result<Vec<i64>>>()?;
    LcpArray::from_interior(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::StringCollection;
    use crate::oracle;

    fn split_build(docs: &[&str], at: usize) -> (MultiBwt, LcpArray, MultiBwt, LcpArray) {
        let coll = StringCollection::remap(docs).unwrap();
        let c0 = coll.subset(0..at).unwrap();
        let c1 = coll.subset(at..docs.len()).unwrap();
        let (b0, l0) = oracle::bwt_and_lcp_build(&c0);
        let (b1, l1) = oracle::bwt_and_lcp_build(&c1);
        (b0, l0, b1, l1)
    }

    fn oracle_union(docs: &[&str], at: usize) -> (MultiBwt, LcpArray) {
        let coll = StringCollection::remap(docs).unwrap();
        let _ = at;
        oracle::bwt_and_lcp_build(&coll)
    }

    #[test]
    fn reference_merge_interleave() {
        let (b0, _, b1, _) = split_build(&["abcab", "aabcabc"], 1);
        let (z, merged, _) = hm_merge(&b0, &b1).unwrap();
        let expect: Vec<bool> = [0, 1, 1, 0, 1, 0, 1, 0, 1, 0, 1, 1, 0, 1]
            .iter()
            .map(|&v| v == 1)
            .collect();
        assert_eq!(z.iter().collect::<Vec<_>>(), expect);
        assert_eq!(
            merged.symbols(),
            &[2, 3, 0, 3, 3, 0, 1, 1, 1, 1, 1, 2, 2, 2]
        );
        assert_eq!(merged.sentinel_ids(), &[1, 0]);
    }

    #[test]
    fn reference_merge_lcp() {
        let (b0, _, b1, _) = split_build(&["abcab", "aabcabc"], 1);
        let out = hm_merge_lcp(&b0, &b1).unwrap();
        assert_eq!(
            out.lcp.interior(),
            &[0, 0, 1, 2, 3, 5, 0, 1, 2, 4, 0, 1, 3]
        );
        let (expect_bwt, expect_lcp) = oracle_union(&["abcab", "aabcabc"], 1);
        assert_eq!(out.merged, expect_bwt);
        assert_eq!(out.lcp, expect_lcp);
    }

    #[test]
    fn single_symbol_docs_fixpoint() {
        let (b0, _, b1, _) = split_build(&["a", "a"], 1);
        let (_, merged, report) = hm_merge(&b0, &b1).unwrap();
        assert_eq!(merged.symbols(), &[1, 1, 0, 0]);
        assert!(report.iterations <= 3);
    }

    #[test]
    fn identical_docs_boundary_value() {
        // between the two 'a'-context rows the LCP is 1, found in pass 2
        let (b0, _, b1, _) = split_build(&["a", "a"], 1);
        let mut run = LcpMergeRun::new(&b0, &b1).unwrap();
        run.step().unwrap();
        assert_eq!(run.boundaries()[3], 0);
        run.step().unwrap();
        assert_eq!(run.boundaries()[3], 2);
        let out = run.finish().unwrap();
        assert_eq!(out.lcp.interior(), &[0, 0, 1]);
    }

    #[test]
    fn first_boundary_entry_is_never_rewritten() {
        let (b0, _, b1, _) = split_build(&["abcab", "aabcabc"], 1);
        let mut run = LcpMergeRun::new(&b0, &b1).unwrap();
        while run.step().unwrap() {
            assert_eq!(run.boundaries()[0], 1);
        }
        assert_eq!(run.boundaries()[0], 1);
    }

    #[test]
    fn gap_matches_reference_at_any_tau() {
        let docs = ["abcab", "aabcabc"];
        let (b0, l0, b1, l1) = split_build(&docs, 1);
        let (expect_bwt, expect_lcp) = oracle_union(&docs, 1);
        for tau in [1usize, 4, 1 << 20] {
            let out = gap_merge(&b0, &l0, &b1, &l1, tau).unwrap();
            assert_eq!(out.merged, expect_bwt, "tau={tau}");
            assert_eq!(out.lcp, expect_lcp, "tau={tau}");
        }
    }

    #[test]
    fn bwt_only_matches_and_pairs_reconstruct() {
        let docs = ["abcab", "aabcabc"];
        let (b0, _, b1, _) = split_build(&docs, 1);
        let (expect_bwt, expect_lcp) = oracle_union(&docs, 1);
        let out = gap_merge_bwt_only(&b0, &b1, 4, true).unwrap();
        assert_eq!(out.merged, expect_bwt);
        let pairs = out.pairs.unwrap();
        let rebuilt = reconstruct_lcp(&pairs, expect_bwt.len()).unwrap();
        assert_eq!(rebuilt, expect_lcp);
        let mut sorted = pairs.clone();
        sorted.sort_by_key(|p| p.index);
        let values: Vec<i64> = sorted.iter().map(|p| p.value as i64).collect();
        assert_eq!(values, expect_lcp.interior());
    }

    #[test]
    fn reconstruct_rejects_bad_streams() {
        let pair = |index, value| LcpPair { index, value };
        assert!(matches!(
            reconstruct_lcp(&[pair(1, 0)], 3),
            Err(Error::PairStreamMissing { index: 2 })
        ));
        assert!(matches!(
            reconstruct_lcp(&[pair(1, 0), pair(1, 2)], 3),
            Err(Error::PairStreamDuplicate { index: 1 })
        ));
        assert!(matches!(
            reconstruct_lcp(&[pair(3, 0)], 3),
            Err(Error::PairStreamRange { index: 3, n: 3 })
        ));
        assert!(reconstruct_lcp(&[], 1).unwrap().interior().is_empty());
    }

    #[test]
    fn interleave_concatenates_on_trivial_vector() {
        let (b0, _, b1, _) = split_build(&["ba", "ab"], 1);
        let mut z = BitVec::new(6, false);
        for i in 3..6 {
            z.set(i, true);
        }
        let merged = interleave_apply(&z, &b0, &b1).unwrap();
        let mut expect = b0.symbols().to_vec();
        expect.extend_from_slice(b1.symbols());
        assert_eq!(merged.symbols(), expect.as_slice());
        assert_eq!(merged.sentinel_ids(), &[0, 1]);
    }

    #[test]
    fn mismatched_alphabets_are_rejected() {
        let c0 = StringCollection::remap(&["ab"]).unwrap();
        let c1 = StringCollection::remap(&["abc"]).unwrap();
        let b0 = oracle::bwt_build(&c0);
        let b1 = oracle::bwt_build(&c1);
        assert!(matches!(
            hm_merge(&b0, &b1),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn multi_document_sides() {
        let docs = ["ab", "bab", "aab", "abba", "bb"];
        let (b0, l0, b1, l1) = split_build(&docs, 2);
        let (expect_bwt, expect_lcp) = oracle_union(&docs, 2);
        let out = hm_merge_lcp(&b0, &b1).unwrap();
        assert_eq!(out.merged, expect_bwt);
        assert_eq!(out.lcp, expect_lcp);
        let gap = gap_merge(&b0, &l0, &b1, &l1, 1).unwrap();
        assert_eq!(gap.merged, expect_bwt);
        assert_eq!(gap.lcp, expect_lcp);
    }
}
