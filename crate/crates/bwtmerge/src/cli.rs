//! Command workflows behind the `bwtmerge` binary: build reference indices
//! from corpora, merge existing index files, verify a merge against the
//! enumeration builders, report statistics, and benchmark the engines on
//! synthetic collections.
//!
//! Index files are addressed by prefix; each mode appends its extensions
//! (`.gbwt`/`.glcp`, `.gxbw`, `.gcbw`).

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, StringCollection};
use crate::error::{Error, Result};
use crate::index::{lcp_stats, AggregateStat, IndexStats};
use crate::merge_bwt::MergeReport;
use crate::merge_circular::CircularMode;
use crate::{io, merge_bwt, merge_circular, merge_xbwt, oracle};

/// Index family a command operates on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Bwt,
    BwtLcp,
    Xbwt,
    Circular,
    Permuterm,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bwt" => Ok(Mode::Bwt),
            "bwt-lcp" => Ok(Mode::BwtLcp),
            "xbwt" => Ok(Mode::Xbwt),
            "circular" => Ok(Mode::Circular),
            "permuterm" => Ok(Mode::Permuterm),
            other => Err(Error::format(format!(
                "unknown mode '{other}' (expected bwt, bwt-lcp, xbwt, circular or permuterm)"
            ))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Mode::Bwt => "bwt",
            Mode::BwtLcp => "bwt-lcp",
            Mode::Xbwt => "xbwt",
            Mode::Circular => "circular",
            Mode::Permuterm => "permuterm",
        };
        f.write_str(name)
    }
}

/// A fully resolved command invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    /// 0 picks the default, sigma + 2.
    pub tau: usize,
    pub inputs: Vec<PathBuf>,
    pub output: Option<PathBuf>,
    pub emit_pairs: Option<PathBuf>,
    pub json: bool,
    pub seed: u64,
    pub max_oracle_n: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::BwtLcp,
            tau: 0,
            inputs: Vec::new(),
            output: None,
            emit_pairs: None,
            json: false,
            seed: 0,
            max_oracle_n: DEFAULT_ORACLE_CAP,
        }
    }
}

/// Default cap for the quadratic reference builders.
pub const DEFAULT_ORACLE_CAP: usize = 1 << 20;

fn effective_tau(tau: usize, sigma: u8) -> usize {
    if tau == 0 {
        sigma as usize + 2
    } else {
        tau
    }
}

fn check_cap(coll: &StringCollection, cap: usize) -> Result<()> {
    let n = coll.len_with_terminators();
    if n > cap {
        return Err(Error::OracleCapExceeded { n, cap });
    }
    Ok(())
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(ext);
    PathBuf::from(name)
}

// --- build ---------------------------------------------------------------

/// Builds the reference index of a corpus with the enumeration builders
/// and writes the mode's file(s) under the output prefix. Returns the
/// written paths.
pub fn cmd_build(
    corpus: &Path,
    mode: Mode,
    output_prefix: &Path,
    max_oracle_n: usize,
) -> Result<Vec<PathBuf>> {
    let coll = io::ingest_auto(corpus)?;
    check_cap(&coll, max_oracle_n)?;
    let mut written = Vec::new();
    match mode {
        Mode::Bwt => {
            let bwt = oracle::bwt_build(&coll);
            let path = with_ext(output_prefix, ".gbwt");
            io::write_bwt(&path, &bwt)?;
            written.push(path);
        }
        Mode::BwtLcp => {
            let (bwt, lcp) = oracle::bwt_and_lcp_build(&coll);
            let bwt_path = with_ext(output_prefix, ".gbwt");
            let lcp_path = with_ext(output_prefix, ".glcp");
            io::write_bwt(&bwt_path, &bwt)?;
            io::write_lcp(&lcp_path, &lcp)?;
            written.push(bwt_path);
            written.push(lcp_path);
        }
        Mode::Xbwt => {
            let x = oracle::xbwt_build(&oracle::trie_build(&coll), coll.sigma());
            let path = with_ext(output_prefix, ".gxbw");
            io::write_xbwt(&path, &x)?;
            written.push(path);
        }
        Mode::Circular | Mode::Permuterm => {
            let cmode = circular_mode(mode);
            let (cbwt, lengths) = oracle::cbwt_build(&coll, cmode)?;
            let path = with_ext(output_prefix, ".gcbw");
            io::write_cbwt(&path, &cbwt, &lengths)?;
            written.push(path);
        }
    }
    Ok(written)
}

fn circular_mode(mode: Mode) -> CircularMode {
    match mode {
        Mode::Circular => CircularMode::Circular,
        Mode::Permuterm => CircularMode::Permuterm,
        _ => unreachable!("not a circular mode"),
    }
}

// --- merge ---------------------------------------------------------------

/// Outcome of a merge command.
#[derive(Debug, serde::Serialize)]
pub struct MergeSummary {
    pub mode: Mode,
    pub tau: usize,
    pub outputs: Vec<PathBuf>,
    pub merged_len: usize,
    pub duplicates_dropped: usize,
    pub report: MergeReport,
    pub wall_ms: f64,
}

/// Merges two index files (given by prefix) and writes the result under
/// the output prefix.
pub fn cmd_merge(
    left: &Path,
    right: &Path,
    mode: Mode,
    tau: usize,
    emit_pairs: Option<&Path>,
    output_prefix: &Path,
) -> Result<MergeSummary> {
    if emit_pairs.is_some() && mode != Mode::Bwt {
        return Err(Error::format(
            "the boundary pair stream is only produced in bwt mode",
        ));
    }
    let started = Instant::now();
    let mut outputs = Vec::new();
    let (merged_len, duplicates_dropped, report, tau) = match mode {
        Mode::Bwt => {
            let a = io::read_bwt(&with_ext(left, ".gbwt"))?;
            let b = io::read_bwt(&with_ext(right, ".gbwt"))?;
            let tau = effective_tau(tau, a.sigma());
            let out = merge_bwt::gap_merge_bwt_only(&a, &b, tau, emit_pairs.is_some())?;
            let path = with_ext(output_prefix, ".gbwt");
            io::write_bwt(&path, &out.merged)?;
            outputs.push(path);
            if let (Some(stream), Some(pairs)) = (emit_pairs, &out.pairs) {
                io::write_pairs(stream, pairs)?;
                outputs.push(stream.to_path_buf());
            }
            (out.merged.len(), 0, out.report, tau)
        }
        Mode::BwtLcp => {
            let a = io::read_bwt(&with_ext(left, ".gbwt"))?;
            let la = io::read_lcp(&with_ext(left, ".glcp"))?;
            let b = io::read_bwt(&with_ext(right, ".gbwt"))?;
            let lb = io::read_lcp(&with_ext(right, ".glcp"))?;
            let tau = effective_tau(tau, a.sigma());
            let out = merge_bwt::gap_merge(&a, &la, &b, &lb, tau)?;
            let bwt_path = with_ext(output_prefix, ".gbwt");
            let lcp_path = with_ext(output_prefix, ".glcp");
            io::write_bwt(&bwt_path, &out.merged)?;
            io::write_lcp(&lcp_path, &out.lcp)?;
            outputs.push(bwt_path);
            outputs.push(lcp_path);
            (out.merged.len(), 0, out.report, tau)
        }
        Mode::Xbwt => {
            let a = io::read_xbwt(&with_ext(left, ".gxbw"))?;
            let b = io::read_xbwt(&with_ext(right, ".gxbw"))?;
            let tau = effective_tau(tau, a.sigma());
            let (merged, report) = merge_xbwt::xbwt_gap_merge(&a, &b, tau)?;
            let path = with_ext(output_prefix, ".gxbw");
            io::write_xbwt(&path, &merged)?;
            outputs.push(path);
            (merged.len(), 0, report, tau)
        }
        Mode::Circular => {
            let (a, la) = io::read_cbwt(&with_ext(left, ".gcbw"))?;
            let (b, lb) = io::read_cbwt(&with_ext(right, ".gcbw"))?;
            let tau = effective_tau(tau, a.sigma());
            let out = merge_circular::cbwt_gap_merge(&a, &la, &b, &lb, tau)?;
            let path = with_ext(output_prefix, ".gcbw");
            io::write_cbwt(&path, &out.merged, &out.lengths)?;
            outputs.push(path);
            (out.merged.len(), out.duplicates.len(), out.report, tau)
        }
        Mode::Permuterm => {
            let (a, _) = io::read_cbwt(&with_ext(left, ".gcbw"))?;
            let (b, _) = io::read_cbwt(&with_ext(right, ".gcbw"))?;
            let tau = effective_tau(tau, a.sigma());
            let out = merge_circular::permuterm_merge(&a, &b, tau)?;
            let lengths = merge_circular::LengthStructure::from_cbwt(&out.merged);
            let path = with_ext(output_prefix, ".gcbw");
            io::write_cbwt(&path, &out.merged, &lengths)?;
            outputs.push(path);
            (out.merged.len(), out.duplicates.len(), out.report, tau)
        }
    };
    Ok(MergeSummary {
        mode,
        tau,
        outputs,
        merged_len,
        duplicates_dropped,
        report,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

// --- verify --------------------------------------------------------------

/// Builds both corpora, merges with the engine for the mode, rebuilds the
/// union with the enumeration builders and compares. True means equal.
pub fn cmd_verify(
    corpus_a: &Path,
    corpus_b: &Path,
    mode: Mode,
    tau: usize,
    max_oracle_n: usize,
) -> Result<bool> {
    let a = io::ingest_auto(corpus_a)?;
    let b = io::ingest_auto(corpus_b)?;
    let (a, b) = StringCollection::remap_pair(&a, &b)?;
    check_cap(&a, max_oracle_n)?;
    check_cap(&b, max_oracle_n)?;
    let tau = effective_tau(tau, a.sigma());
    let equal = match mode {
        Mode::Bwt => {
            let out = merge_bwt::gap_merge_bwt_only(
                &oracle::bwt_build(&a),
                &oracle::bwt_build(&b),
                tau,
                false,
            )?;
            out.merged == oracle::bwt_build(&a.union(&b)?)
        }
        Mode::BwtLcp => {
            let (ba, la) = oracle::bwt_and_lcp_build(&a);
            let (bb, lb) = oracle::bwt_and_lcp_build(&b);
            let out = merge_bwt::gap_merge(&ba, &la, &bb, &lb, tau)?;
            let (expect_bwt, expect_lcp) = oracle::bwt_and_lcp_build(&a.union(&b)?);
            out.merged == expect_bwt && out.lcp == expect_lcp
        }
        Mode::Xbwt => {
            let xa = oracle::xbwt_build(&oracle::trie_build(&a), a.sigma());
            let xb = oracle::xbwt_build(&oracle::trie_build(&b), b.sigma());
            let (merged, _) = merge_xbwt::xbwt_gap_merge(&xa, &xb, tau)?;
            merged == oracle::xbwt_build(&oracle::trie_build(&a.union(&b)?), a.sigma())
        }
        Mode::Circular | Mode::Permuterm => {
            let cmode = circular_mode(mode);
            let (ca, la) = oracle::cbwt_build(&a, cmode)?;
            let (cb, lb) = oracle::cbwt_build(&b, cmode)?;
            let union = oracle::circular_union_dedup(&a, &b, cmode)?;
            let (expect, expect_len) = oracle::cbwt_build(&union, cmode)?;
            match mode {
                Mode::Circular => {
                    let out = merge_circular::cbwt_gap_merge(&ca, &la, &cb, &lb, tau)?;
                    out.merged == expect && out.lengths == expect_len
                }
                _ => {
                    let out = merge_circular::permuterm_merge(&ca, &cb, tau)?;
                    out.merged == expect
                }
            }
        }
    };
    Ok(equal)
}

// --- stats ---------------------------------------------------------------

#[derive(Debug, serde::Serialize)]
pub struct StatsReport {
    pub mode: Mode,
    pub inputs: Vec<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub documents: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbols: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<u8>,
    pub stats: IndexStats,
    /// Present when two corpora were given: the merge's diagnostics.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub merge: Option<MergeReport>,
}

fn corpus_stats(coll: &StringCollection, mode: Mode) -> Result<IndexStats> {
    let mut stats = IndexStats::default();
    match mode {
        Mode::Bwt | Mode::BwtLcp => {
            stats.lcp = Some(lcp_stats(&oracle::lcp_build(coll)));
        }
        Mode::Xbwt => {
            stats.trie_height = Some(oracle::trie_build(coll).height_stats());
        }
        Mode::Circular | Mode::Permuterm => {
            stats.circular_lcp = Some(merge_circular::clcp_stats(coll, circular_mode(mode))?);
        }
    }
    Ok(stats)
}

fn index_file_stats(path: &Path) -> Result<StatsReport> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let mut report = StatsReport {
        mode: Mode::BwtLcp,
        inputs: vec![path.to_path_buf()],
        documents: None,
        symbols: None,
        sigma: None,
        stats: IndexStats::default(),
        merge: None,
    };
    match ext {
        "gbwt" => {
            let bwt = io::read_bwt(path)?;
            report.mode = Mode::Bwt;
            report.documents = Some(bwt.doc_count());
            report.symbols = Some(bwt.len());
            report.sigma = Some(bwt.sigma());
        }
        "glcp" => {
            let lcp = io::read_lcp(path)?;
            report.symbols = Some(lcp.n());
            report.stats.lcp = Some(lcp_stats(&lcp));
        }
        "gxbw" => {
            let x = io::read_xbwt(path)?;
            report.mode = Mode::Xbwt;
            report.symbols = Some(x.len());
            report.sigma = Some(x.sigma());
            report.documents = Some(x.terminator_count());
        }
        "gcbw" => {
            let (cbwt, lengths) = io::read_cbwt(path)?;
            report.mode = match cbwt.mode() {
                CircularMode::Circular => Mode::Circular,
                CircularMode::Permuterm => Mode::Permuterm,
            };
            report.symbols = Some(cbwt.len());
            report.sigma = Some(cbwt.sigma());
            report.documents = Some(lengths.doc_count());
        }
        other => {
            return Err(Error::format(format!(
                "unrecognized index extension '.{other}'"
            )))
        }
    }
    Ok(report)
}

/// Statistics for one corpus or index file, or for a pair of corpora, in
/// which case the pair is also merged and the merge diagnostics included.
pub fn cmd_stats(
    inputs: &[PathBuf],
    mode: Mode,
    tau: usize,
    max_oracle_n: usize,
) -> Result<StatsReport> {
    match inputs {
        [single] => {
            let ext = single.extension().and_then(|e| e.to_str()).unwrap_or("");
            if matches!(ext, "gbwt" | "glcp" | "gxbw" | "gcbw") {
                return index_file_stats(single);
            }
            let coll = io::ingest_auto(single)?;
            check_cap(&coll, max_oracle_n)?;
            Ok(StatsReport {
                mode,
                inputs: inputs.to_vec(),
                documents: Some(coll.doc_count()),
                symbols: Some(coll.symbol_len()),
                sigma: Some(coll.sigma()),
                stats: corpus_stats(&coll, mode)?,
                merge: None,
            })
        }
        [first, second] => {
            let a = io::ingest_auto(first)?;
            let b = io::ingest_auto(second)?;
            let (a, b) = StringCollection::remap_pair(&a, &b)?;
            check_cap(&a, max_oracle_n)?;
            check_cap(&b, max_oracle_n)?;
            let tau = effective_tau(tau, a.sigma());
            let report = match mode {
                Mode::Bwt => {
                    merge_bwt::gap_merge_bwt_only(
                        &oracle::bwt_build(&a),
                        &oracle::bwt_build(&b),
                        tau,
                        false,
                    )?
                    .report
                }
                Mode::BwtLcp => {
                    let (ba, la) = oracle::bwt_and_lcp_build(&a);
                    let (bb, lb) = oracle::bwt_and_lcp_build(&b);
                    merge_bwt::gap_merge(&ba, &la, &bb, &lb, tau)?.report
                }
                Mode::Xbwt => {
                    let xa = oracle::xbwt_build(&oracle::trie_build(&a), a.sigma());
                    let xb = oracle::xbwt_build(&oracle::trie_build(&b), b.sigma());
                    merge_xbwt::xbwt_gap_merge(&xa, &xb, tau)?.1
                }
                Mode::Circular => {
                    let cmode = circular_mode(mode);
                    let (ca, la) = oracle::cbwt_build(&a, cmode)?;
                    let (cb, lb) = oracle::cbwt_build(&b, cmode)?;
                    merge_circular::cbwt_gap_merge(&ca, &la, &cb, &lb, tau)?.report
                }
                Mode::Permuterm => {
                    let cmode = circular_mode(mode);
                    let (ca, _) = oracle::cbwt_build(&a, cmode)?;
                    let (cb, _) = oracle::cbwt_build(&b, cmode)?;
                    merge_circular::permuterm_merge(&ca, &cb, tau)?.report
                }
            };
            let union = match mode {
                Mode::Circular | Mode::Permuterm => {
                    oracle::circular_union_dedup(&a, &b, circular_mode(mode))?
                }
                _ => a.union(&b)?,
            };
            Ok(StatsReport {
                mode,
                inputs: inputs.to_vec(),
                documents: Some(union.doc_count()),
                symbols: Some(union.symbol_len()),
                sigma: Some(union.sigma()),
                stats: corpus_stats(&union, mode)?,
                merge: Some(report),
            })
        }
        _ => Err(Error::format("stats expects one or two inputs")),
    }
}

// --- bench ---------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchFamily {
    /// Two single-document inputs sharing a long run of one symbol,
    /// differing in the final symbol, over a range of run lengths.
    SharedPrefix,
    /// A uniform random collection split into two halves.
    Random,
}

impl FromStr for BenchFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shared-prefix" => Ok(BenchFamily::SharedPrefix),
            "random" => Ok(BenchFamily::Random),
            other => Err(Error::format(format!("unknown family '{other}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub family: BenchFamily,
    /// Run-length exponent range for the shared-prefix family.
    pub min_exp: u32,
    pub max_exp: u32,
    /// Shape of the random family.
    pub docs: usize,
    pub doc_len: usize,
    pub sigma: u8,
    pub seed: u64,
    /// Thresholds to sweep; empty means "sigma + 2" only.
    pub taus: Vec<usize>,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            family: BenchFamily::SharedPrefix,
            min_exp: 4,
            max_exp: 10,
            docs: 8,
            doc_len: 256,
            sigma: 4,
            seed: 1,
            taus: Vec::new(),
        }
    }
}

#[derive(Debug, serde::Serialize)]
pub struct BenchRow {
    pub case: String,
    pub tau: usize,
    pub n: usize,
    pub iterations: u32,
    pub total_active: u64,
    pub lcp_total: u64,
    pub active_per_iteration: Vec<u64>,
    pub peak_irrelevant_records: usize,
    pub peak_irrelevant_bytes: usize,
    pub wall_ms: f64,
}

#[derive(Debug, serde::Serialize)]
pub struct BenchReport {
    pub family: BenchFamily,
    pub rows: Vec<BenchRow>,
}

fn bench_case(
    name: &str,
    c0: &StringCollection,
    c1: &StringCollection,
    taus: &[usize],
    rows: &mut Vec<BenchRow>,
) -> Result<()> {
    let (b0, l0) = oracle::bwt_and_lcp_build(c0);
    let (b1, l1) = oracle::bwt_and_lcp_build(c1);
    let sweep: Vec<usize> = if taus.is_empty() {
        vec![c0.sigma() as usize + 2]
    } else {
        taus.to_vec()
    };
    for tau in sweep {
        let started = Instant::now();
        let out = merge_bwt::gap_merge(&b0, &l0, &b1, &l1, tau)?;
        let wall_ms = started.elapsed().as_secs_f64() * 1e3;
        rows.push(BenchRow {
            case: name.to_string(),
            tau,
            n: out.merged.len(),
            iterations: out.report.iterations,
            total_active: out.report.total_active(),
            lcp_total: out.lcp.interior().iter().map(|&v| v as u64).sum(),
            active_per_iteration: out.report.active_per_iteration.clone(),
            peak_irrelevant_records: out.report.peak_irrelevant_records,
            peak_irrelevant_bytes: out.report.peak_irrelevant_bytes,
            wall_ms,
        });
    }
    Ok(())
}

/// Runs the benchmark family and returns one row per case and threshold.
pub fn cmd_bench(spec: &BenchSpec) -> Result<BenchReport> {
    let mut rows = Vec::new();
    match spec.family {
        BenchFamily::SharedPrefix => {
            let alphabet = Alphabet::from_docs(&[b"abc".as_slice()])?;
            for exp in spec.min_exp..=spec.max_exp {
                let m = 1usize << exp;
                let side = |tail: u8| {
                    let mut doc = vec![1u8; m];
                    doc.push(tail);
                    StringCollection::from_internal(vec![doc], alphabet.clone())
                };
                let c0 = side(2)?;
                let c1 = side(3)?;
                bench_case(
                    &format!("shared-prefix m=2^{exp}"),
                    &c0,
                    &c1,
                    &spec.taus,
                    &mut rows,
                )?;
            }
        }
        BenchFamily::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let bytes: Vec<u8> = (0..spec.sigma).map(|i| b'a' + i).collect();
            let alphabet = Alphabet::from_docs(&[bytes])?;
            let docs: Vec<Vec<u8>> = (0..spec.docs.max(2))
                .map(|_| {
                    let len = rng.gen_range(1..=spec.doc_len.max(1));
                    (0..len).map(|_| rng.gen_range(1..=spec.sigma)).collect()
                })
                .collect();
            let coll = StringCollection::from_internal(docs, alphabet)?;
            let half = coll.doc_count() / 2;
            let c0 = coll.subset(0..half)?;
            let c1 = coll.subset(half..coll.doc_count())?;
            bench_case("random halves", &c0, &c1, &spec.taus, &mut rows)?;
        }
    }
    Ok(BenchReport {
        family: spec.family,
        rows,
    })
}

// --- plain-text rendering --------------------------------------------------

fn render_stat(name: &str, stat: &AggregateStat, out: &mut String) {
    out.push_str(&format!(
        "{name}: max {} ave {:.4} ({}/{})\n",
        stat.max,
        stat.average(),
        stat.sum,
        stat.denom
    ));
}

impl StatsReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("mode: {}\n", self.mode));
        if let Some(d) = self.documents {
            out.push_str(&format!("documents: {d}\n"));
        }
        if let Some(s) = self.symbols {
            out.push_str(&format!("symbols: {s}\n"));
        }
        if let Some(s) = self.sigma {
            out.push_str(&format!("sigma: {s}\n"));
        }
        if let Some(stat) = &self.stats.lcp {
            render_stat("lcp", stat, &mut out);
        }
        if let Some(stat) = &self.stats.trie_height {
            render_stat("trie height", stat, &mut out);
        }
        if let Some(stat) = &self.stats.circular_lcp {
            render_stat("circular lcp", stat, &mut out);
        }
        if let Some(report) = &self.merge {
            out.push_str(&format!(
                "merge: {} passes, {} active positions, peak {} skip records ({} bytes)\n",
                report.iterations,
                report.total_active(),
                report.peak_irrelevant_records,
                report.peak_irrelevant_bytes
            ));
        }
        out
    }
}

impl MergeSummary {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "merged {} rows in {:.2} ms (mode {}, tau {})\n",
            self.merged_len, self.wall_ms, self.mode, self.tau
        ));
        if self.duplicates_dropped > 0 {
            out.push_str(&format!(
                "dropped {} duplicate rotation rows\n",
                self.duplicates_dropped
            ));
        }
        out.push_str(&format!(
            "{} passes, {} active positions, peak {} skip records ({} bytes)\n",
            self.report.iterations,
            self.report.total_active(),
            self.report.peak_irrelevant_records,
            self.report.peak_irrelevant_bytes
        ));
        for path in &self.outputs {
            out.push_str(&format!("wrote {}\n", path.display()));
        }
        out
    }
}

impl BenchReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("case\ttau\tn\tpasses\tactive\tlcp-total\tpeak-bytes\twall-ms\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.2}\n",
                row.case,
                row.tau,
                row.n,
                row.iterations,
                row.total_active,
                row.lcp_total,
                row.peak_irrelevant_bytes,
                row.wall_ms
            ));
        }
        out
    }
}
