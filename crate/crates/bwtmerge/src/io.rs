//! Serialization of the index types and ingestion of text corpora.
//!
//! Every format is little-endian with a six-byte header (four magic bytes,
//! a version byte, a flags byte) followed by `u64` counts. Outputs are
//! deterministic: the same value always serializes to the same bytes.
//!
//! * `.gbwt` — multi-string BWT: counts n, sigma, k; n symbol bytes with 0
//!   for the terminators; k little-endian `u32` sentinel ids.
//! * `.glcp` — LCP array: the flags byte holds the entry width (1, 2, 4 or
//!   8, the smallest fitting the maximum value); count n; the n-1 interior
//!   values. The guard entries are implicit.
//! * `.gxbw` — trie transform: counts m (edges), n (nodes), sigma; the
//!   group-end bits packed least-significant-first; m label bytes with 0
//!   for the terminator.
//! * `.gcbw` — circular transform: the flags byte holds the mode (0
//!   circular, 1 permuterm); counts n, sigma, k; n symbol bytes; k
//!   little-endian `u32` document lengths in first-appearance order. The
//!   per-position document map is rebuilt on read from the transform's own
//!   cycle structure.
//! * pair stream — bare records of `u64` boundary index and `u32` value.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::alphabet::StringCollection;
use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::index::{LcpArray, MultiBwt};
use crate::merge_bwt::LcpPair;
use crate::merge_circular::{Cbwt, CircularMode, LengthStructure};
use crate::merge_xbwt::Xbwt;

const VERSION: u8 = 1;

fn write_header<W: Write>(w: &mut W, magic: &[u8; 4], flags: u8) -> Result<()> {
    w.write_all(magic)?;
    w.write_all(&[VERSION, flags])?;
    Ok(())
}

fn read_header<R: Read>(r: &mut R, magic: &[u8; 4]) -> Result<u8> {
    let mut buf = [0u8; 6];
    r.read_exact(&mut buf)
        .map_err(|_| Error::format("truncated header"))?;
    if &buf[..4] != magic {
        return Err(Error::format(format!(
            "bad magic: expected {:?}",
            std::str::from_utf8(magic).unwrap_or("?")
        )));
    }
    if buf[4] != VERSION {
        return Err(Error::format(format!("unsupported version {}", buf[4])));
    }
    Ok(buf[5])
}

fn write_u64<W: Write>(w: &mut W, v: u64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)
        .map_err(|_| Error::format("truncated count"))?;
    Ok(u64::from_le_bytes(buf))
}

fn write_u32<W: Write>(w: &mut W, v: u32) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)
        .map_err(|_| Error::format("truncated value"))?;
    Ok(u32::from_le_bytes(buf))
}

fn read_bytes<R: Read>(r: &mut R, n: usize, what: &str) -> Result<Vec<u8>> {
    let mut buf = vec![0u8; n];
    r.read_exact(&mut buf)
        .map_err(|_| Error::format(format!("truncated {what}")))?;
    Ok(buf)
}

fn expect_eof<R: Read>(r: &mut R) -> Result<()> {
    let mut buf = [0u8; 1];
    match r.read(&mut buf)? {
        0 => Ok(()),
        _ => Err(Error::format("trailing bytes after payload")),
    }
}

// --- multi-string BWT --------------------------------------------------------

pub fn write_bwt_to<W: Write>(w: &mut W, bwt: &MultiBwt) -> Result<()> {
    write_header(w, b"GBW1", 0)?;
    write_u64(w, bwt.len() as u64)?;
    write_u64(w, bwt.sigma() as u64)?;
    write_u64(w, bwt.doc_count() as u64)?;
    w.write_all(bwt.symbols())?;
    for &id in bwt.sentinel_ids() {
        write_u32(w, id)?;
    }
    Ok(())
}

pub fn read_bwt_from<R: Read>(r: &mut R) -> Result<MultiBwt> {
    read_header(r, b"GBW1")?;
    let n = read_u64(r)? as usize;
    let sigma = read_u64(r)?;
    let k = read_u64(r)? as usize;
    if sigma > 255 {
        return Err(Error::format("sigma out of range"));
    }
    let symbols = read_bytes(r, n, "symbols")?;
    let mut sentinel_ids = Vec::with_capacity(k);
    for _ in 0..k {
        sentinel_ids.push(read_u32(r)?);
    }
    expect_eof(r)?;
    MultiBwt::new(symbols, sentinel_ids, sigma as u8)
}

pub fn write_bwt(path: &Path, bwt: &MultiBwt) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_bwt_to(&mut w, bwt)?;
    w.flush()?;
    Ok(())
}

pub fn read_bwt(path: &Path) -> Result<MultiBwt> {
    read_bwt_from(&mut BufReader::new(File::open(path)?))
}

// --- LCP array ----------------------------------------------------------------

/// Smallest of the supported widths that fits the maximum interior value.
pub fn lcp_width(lcp: &LcpArray) -> u8 {
    match lcp.max_lcp() {
        0..=0xFF => 1,
        0x100..=0xFFFF => 2,
        0x1_0000..=0xFFFF_FFFF => 4,
        _ => 8,
    }
}

pub fn write_lcp_to<W: Write>(w: &mut W, lcp: &LcpArray) -> Result<()> {
    let width = lcp_width(lcp);
    write_header(w, b"GLC1", width)?;
    write_u64(w, lcp.n() as u64)?;
    for &v in lcp.interior() {
        let bytes = (v as u64).to_le_bytes();
        w.write_all(&bytes[..width as usize])?;
    }
    Ok(())
}

pub fn read_lcp_from<R: Read>(r: &mut R) -> Result<LcpArray> {
    let width = read_header(r, b"GLC1")?;
    if !matches!(width, 1 | 2 | 4 | 8) {
        return Err(Error::format(format!("bad LCP width {width}")));
    }
    let n = read_u64(r)? as usize;
    if n == 0 {
        return Err(Error::format("empty LCP array"));
    }
    let raw = read_bytes(r, (n - 1) * width as usize, "LCP values")?;
    let interior = raw
        .chunks_exact(width as usize)
        .map(|chunk| {
            let mut bytes = [0u8; 8];
            bytes[..chunk.len()].copy_from_slice(chunk);
            u64::from_le_bytes(bytes) as i64
        })
        .collect();
    expect_eof(r)?;
    LcpArray::from_interior(interior)
}

pub fn write_lcp(path: &Path, lcp: &LcpArray) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_lcp_to(&mut w, lcp)?;
    w.flush()?;
    Ok(())
}

pub fn read_lcp(path: &Path) -> Result<LcpArray> {
    read_lcp_from(&mut BufReader::new(File::open(path)?))
}

// --- trie transform -------------------------------------------------------------

pub fn write_xbwt_to<W: Write>(w: &mut W, x: &Xbwt) -> Result<()> {
    write_header(w, b"GXB1", 0)?;
    write_u64(w, x.len() as u64)?;
    write_u64(w, x.node_count() as u64)?;
    write_u64(w, x.sigma() as u64)?;
    let mut packed = vec![0u8; x.len().div_ceil(8)];
    for (i, bit) in x.last().iter().enumerate() {
        if bit {
            packed[i / 8] |= 1 << (i % 8);
        }
    }
    w.write_all(&packed)?;
    w.write_all(x.labels())?;
    Ok(())
}

pub fn read_xbwt_from<R: Read>(r: &mut R) -> Result<Xbwt> {
    read_header(r, b"GXB1")?;
    let m = read_u64(r)? as usize;
    let n = read_u64(r)? as usize;
    let sigma = read_u64(r)?;
    if sigma > 255 {
        return Err(Error::format("sigma out of range"));
    }
    let packed = read_bytes(r, m.div_ceil(8), "group-end bits")?;
    let mut last = BitVec::new(m, false);
    for i in 0..m {
        if packed[i / 8] >> (i % 8) & 1 != 0 {
            last.set(i, true);
        }
    }
    let labels = read_bytes(r, m, "labels")?;
    expect_eof(r)?;
    let x = Xbwt::new(last, labels, sigma as u8)?;
    if x.node_count() != n {
        return Err(Error::format(format!(
            "header claims {n} nodes, payload has {}",
            x.node_count()
        )));
    }
    Ok(x)
}

pub fn write_xbwt(path: &Path, x: &Xbwt) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_xbwt_to(&mut w, x)?;
    w.flush()?;
    Ok(())
}

pub fn read_xbwt(path: &Path) -> Result<Xbwt> {
    read_xbwt_from(&mut BufReader::new(File::open(path)?))
}

// --- circular transform -----------------------------------------------------------

pub fn write_cbwt_to<W: Write>(w: &mut W, cbwt: &Cbwt, lengths: &LengthStructure) -> Result<()> {
    if lengths.len() != cbwt.len() {
        return Err(Error::corrupt("length structure does not match transform"));
    }
    let mode_flag = match cbwt.mode() {
        CircularMode::Circular => 0,
        CircularMode::Permuterm => 1,
    };
    write_header(w, b"GCB1", mode_flag)?;
    write_u64(w, cbwt.len() as u64)?;
    write_u64(w, cbwt.sigma() as u64)?;
    write_u64(w, lengths.doc_count() as u64)?;
    w.write_all(cbwt.symbols())?;
    for &len in lengths.doc_lengths() {
        write_u32(w, len)?;
    }
    Ok(())
}

pub fn read_cbwt_from<R: Read>(r: &mut R) -> Result<(Cbwt, LengthStructure)> {
    let flags = read_header(r, b"GCB1")?;
    let mode = match flags {
        0 => CircularMode::Circular,
        1 => CircularMode::Permuterm,
        other => return Err(Error::format(format!("bad mode flag {other}"))),
    };
    let n = read_u64(r)? as usize;
    let sigma = read_u64(r)?;
    let k = read_u64(r)? as usize;
    if sigma > 255 {
        return Err(Error::format("sigma out of range"));
    }
    let symbols = read_bytes(r, n, "symbols")?;
    let mut stored = Vec::with_capacity(k);
    for _ in 0..k {
        stored.push(read_u32(r)?);
    }
    expect_eof(r)?;
    let cbwt = Cbwt::new(symbols, sigma as u8, mode)?;
    let lengths = LengthStructure::from_cbwt(&cbwt);
    if lengths.doc_lengths() != stored.as_slice() {
        return Err(Error::format(
            "stored document lengths disagree with the transform's cycles",
        ));
    }
    Ok((cbwt, lengths))
}

pub fn write_cbwt(path: &Path, cbwt: &Cbwt, lengths: &LengthStructure) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_cbwt_to(&mut w, cbwt, lengths)?;
    w.flush()?;
    Ok(())
}

pub fn read_cbwt(path: &Path) -> Result<(Cbwt, LengthStructure)> {
    read_cbwt_from(&mut BufReader::new(File::open(path)?))
}

// --- boundary pair stream ----------------------------------------------------------

pub fn write_pairs_to<W: Write>(w: &mut W, pairs: &[LcpPair]) -> Result<()> {
    for p in pairs {
        write_u64(w, p.index)?;
        write_u32(w, p.value)?;
    }
    Ok(())
}

pub fn read_pairs_from<R: Read>(r: &mut R) -> Result<Vec<LcpPair>> {
    let mut pairs = Vec::new();
    let mut buf = [0u8; 12];
    loop {
        match r.read_exact(&mut buf) {
            Ok(()) => pairs.push(LcpPair {
                index: u64::from_le_bytes(buf[..8].try_into().unwrap()),
                value: u32::from_le_bytes(buf[8..].try_into().unwrap()),
            }),
            Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => break,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(pairs)
}

pub fn write_pairs(path: &Path, pairs: &[LcpPair]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_pairs_to(&mut w, pairs)?;
    w.flush()?;
    Ok(())
}

pub fn read_pairs(path: &Path) -> Result<Vec<LcpPair>> {
    read_pairs_from(&mut BufReader::new(File::open(path)?))
}

// --- corpus ingestion -----------------------------------------------------------------

/// One document per line; the final newline is optional and an empty line
/// is rejected.
pub fn ingest_lines(path: &Path) -> Result<StringCollection> {
    let data = std::fs::read(path)?;
    let mut docs: Vec<&[u8]> = Vec::new();
    for mut line in data.split(|&b| b == b'\n') {
        if let [head @ .., b'\r'] = line {
            line = head;
        }
        docs.push(line);
    }
    if docs.last().is_some_and(|d| d.is_empty()) {
        docs.pop();
    }
    StringCollection::remap(&docs)
}

/// One document per record: a `>` header line followed by sequence lines,
/// which are concatenated.
pub fn ingest_fasta(path: &Path) -> Result<StringCollection> {
    let data = std::fs::read(path)?;
    let mut docs: Vec<Vec<u8>> = Vec::new();
    let mut in_record = false;
    for mut line in data.split(|&b| b == b'\n') {
        if let [head @ .., b'\r'] = line {
            line = head;
        }
        if line.first() == Some(&b'>') {
            docs.push(Vec::new());
            in_record = true;
        } else if !line.is_empty() {
            if !in_record {
                return Err(Error::format("sequence data before the first header"));
            }
            docs.last_mut().unwrap().extend_from_slice(line);
        }
    }
    StringCollection::remap(&docs)
}

/// Picks line or FASTA ingestion by the first byte of the file.
pub fn ingest_auto(path: &Path) -> Result<StringCollection> {
    let mut first = [0u8; 1];
    let is_fasta = match File::open(path)?.read(&mut first)? {
        1 => first[0] == b'>',
        _ => false,
    };
    if is_fasta {
        ingest_fasta(path)
    } else {
        ingest_lines(path)
    }
}
