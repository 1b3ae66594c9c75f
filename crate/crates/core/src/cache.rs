//! Persistent cache of KL data.
//!
//! A file starts with an 8-byte magic, a little-endian `u32` length and a
//! JSON header; then follows an append-only stream of records
//! `kind: u8, len: u32, payload`. A truncated trailing record (from an
//! interrupted write) is ignored on read.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::coxeter::{CoxeterSystem, ElemId};
use crate::error::{Error, Result};
use crate::hecke::{build_wgraph, HTable, WGraph};
use crate::LaurentPoly;

const MAGIC: &[u8; 8] = b"HKCELLS\0";
pub const FORMAT_VERSION: u32 = 1;
/// Normalization of the Hecke algebra all cached data refers to.
pub const NORMALIZATION: &str = "soergel-v";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheHeader {
    pub format_version: u32,
    pub coxeter_type: String,
    pub normalization: String,
}

impl CacheHeader {
    pub fn new(sys: &CoxeterSystem) -> Self {
        CacheHeader {
            format_version: FORMAT_VERSION,
            coxeter_type: sys.coxeter_type().to_string(),
            normalization: NORMALIZATION.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Record {
    /// `b_w = sum_x p_x T_x`.
    KlExpansion { w: ElemId, terms: Vec<(ElemId, LaurentPoly)> },
    /// `b_x b_y = sum_z h_z b_z`.
    HEntry { x: ElemId, y: ElemId, terms: Vec<(ElemId, LaurentPoly)> },
    /// W-graph row of `w`: `deg P_{e,w}` and the lower mu-list.
    WGraphRow { w: ElemId, pe_degree: u16, lower: Vec<(ElemId, i64)> },
}

impl Record {
    fn kind(&self) -> u8 {
        match self {
            Record::KlExpansion { .. } => 1,
            Record::HEntry { .. } => 2,
            Record::WGraphRow { .. } => 3,
        }
    }
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_poly(out: &mut Vec<u8>, p: &LaurentPoly) {
    put_u32(out, p.terms().len() as u32);
    for &(e, c) in p.terms() {
        out.extend_from_slice(&e.to_le_bytes());
        out.extend_from_slice(&c.to_le_bytes());
    }
}

fn put_terms(out: &mut Vec<u8>, terms: &[(ElemId, LaurentPoly)]) {
    put_u32(out, terms.len() as u32);
    for (z, p) in terms {
        put_u32(out, *z);
        put_poly(out, p);
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| Error::CorruptCache("record payload too short".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn i32(&mut self) -> Result<i32> {
        Ok(i32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn poly(&mut self) -> Result<LaurentPoly> {
        let n = self.u32()? as usize;
        let mut terms = Vec::with_capacity(n.min(1 << 16));
        for _ in 0..n {
            terms.push((self.i32()?, self.i64()?));
        }
        let p = LaurentPoly::from_terms(terms.iter().copied());
        if p.terms() != terms.as_slice() {
            return Err(Error::CorruptCache("polynomial terms not in canonical order".into()));
        }
        Ok(p)
    }

    fn terms(&mut self) -> Result<Vec<(ElemId, LaurentPoly)>> {
        let n = self.u32()? as usize;
        let mut out = Vec::with_capacity(n.min(1 << 16));
        for _ in 0..n {
            out.push((self.u32()?, self.poly()?));
        }
        Ok(out)
    }

    fn done(&self) -> bool {
        self.pos == self.buf.len()
    }
}

fn encode_record(r: &Record, out: &mut Vec<u8>) {
    let mut p = Vec::new();
    match r {
        Record::KlExpansion { w, terms } => {
            put_u32(&mut p, *w);
            put_terms(&mut p, terms);
        }
        Record::HEntry { x, y, terms } => {
            put_u32(&mut p, *x);
            put_u32(&mut p, *y);
            put_terms(&mut p, terms);
        }
        Record::WGraphRow { w, pe_degree, lower } => {
            put_u32(&mut p, *w);
            p.extend_from_slice(&pe_degree.to_le_bytes());
            put_u32(&mut p, lower.len() as u32);
            for &(z, m) in lower {
                put_u32(&mut p, z);
                p.extend_from_slice(&m.to_le_bytes());
            }
        }
    }
    out.push(r.kind());
    put_u32(out, p.len() as u32);
    out.extend_from_slice(&p);
}

fn decode_record(kind: u8, payload: &[u8]) -> Result<Record> {
    let mut r = Reader { buf: payload, pos: 0 };
    let rec = match kind {
        1 => Record::KlExpansion { w: r.u32()?, terms: r.terms()? },
        2 => Record::HEntry { x: r.u32()?, y: r.u32()?, terms: r.terms()? },
        3 => {
            let w = r.u32()?;
            let pe_degree = r.u16()?;
            let n = r.u32()? as usize;
            let mut lower = Vec::with_capacity(n.min(1 << 16));
            for _ in 0..n {
                lower.push((r.u32()?, r.i64()?));
            }
            Record::WGraphRow { w, pe_degree, lower }
        }
        k => return Err(Error::CorruptCache(format!("unknown record kind {k}"))),
    };
    if !r.done() {
        return Err(Error::CorruptCache("trailing bytes in record".into()));
    }
    Ok(rec)
}

/// An in-memory cache file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheFile {
    pub header: CacheHeader,
    pub records: Vec<Record>,
}

impl CacheFile {
    pub fn new(header: CacheHeader) -> Self {
        CacheFile { header, records: Vec::new() }
    }

    fn header_bytes(&self) -> Result<Vec<u8>> {
        let json = serde_json::to_vec(&self.header)?;
        let mut out = Vec::with_capacity(12 + json.len());
        out.extend_from_slice(MAGIC);
        put_u32(&mut out, json.len() as u32);
        out.extend_from_slice(&json);
        Ok(out)
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = self.header_bytes()?;
        for r in &self.records {
            encode_record(r, &mut out);
        }
        Ok(out)
    }

    /// Parses a cache image. Fails with `VersionMismatch` when the format
    /// version or normalization differs from this build.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 12 || &bytes[..8] != MAGIC {
            return Err(Error::CorruptCache("bad magic".into()));
        }
        let hlen = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        let body = 12usize
            .checked_add(hlen)
            .filter(|&e| e <= bytes.len())
            .ok_or_else(|| Error::CorruptCache("truncated header".into()))?;
        let header: CacheHeader =
            serde_json::from_slice(&bytes[12..body]).map_err(|e| Error::CorruptCache(format!("header: {e}")))?;
        if header.format_version != FORMAT_VERSION {
            return Err(Error::VersionMismatch(format!(
                "format {} (expected {FORMAT_VERSION})",
                header.format_version
            )));
        }
        if header.normalization != NORMALIZATION {
            return Err(Error::VersionMismatch(format!(
                "normalization {:?} (expected {NORMALIZATION:?})",
                header.normalization
            )));
        }
        let mut records = Vec::new();
        let mut pos = body;
        // A partial record at the end is what an interrupted append leaves.
        while pos + 5 <= bytes.len() {
            let kind = bytes[pos];
            let len = u32::from_le_bytes(bytes[pos + 1..pos + 5].try_into().unwrap()) as usize;
            let end = pos + 5 + len;
            if end > bytes.len() {
                break;
            }
            records.push(decode_record(kind, &bytes[pos + 5..end])?);
            pos = end;
        }
        Ok(CacheFile { header, records })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }

    /// Writes the whole file through a temporary sibling and a rename.
    pub fn write(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = File::create(&tmp)?;
            f.write_all(&self.to_bytes()?)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Appends records to an existing file.
    pub fn append(path: &Path, records: &[Record]) -> Result<()> {
        let mut buf = Vec::new();
        for r in records {
            encode_record(r, &mut buf);
        }
        let mut f = OpenOptions::new().append(true).open(path)?;
        f.write_all(&buf)?;
        Ok(())
    }

    /// Checks that the file describes the given group.
    pub fn check_type(&self, sys: &CoxeterSystem) -> Result<()> {
        let want = sys.coxeter_type().to_string();
        if self.header.coxeter_type != want {
            return Err(Error::VersionMismatch(format!(
                "cache is for {}, not {want}",
                self.header.coxeter_type
            )));
        }
        Ok(())
    }
}

pub fn wgraph_records(wg: &WGraph) -> Vec<Record> {
    (0..wg.len() as ElemId)
        .map(|w| Record::WGraphRow { w, pe_degree: wg.pe_degree(w) as u16, lower: wg.lower(w).to_vec() })
        .collect()
}

pub fn wgraph_from_records(sys: &CoxeterSystem, records: &[Record]) -> Result<WGraph> {
    let n = sys.len();
    let mut lower: Vec<Option<Vec<(ElemId, i64)>>> = vec![None; n];
    let mut pe = vec![0u16; n];
    for r in records {
        if let Record::WGraphRow { w, pe_degree, lower: l } = r {
            let w = *w as usize;
            if w >= n || l.iter().any(|&(z, _)| z as usize >= n) {
                return Err(Error::CorruptCache(format!("W-graph row {w} out of range")));
            }
            pe[w] = *pe_degree;
            lower[w] = Some(l.clone());
        }
    }
    let lower = lower
        .into_iter()
        .enumerate()
        .map(|(w, l)| l.ok_or_else(|| Error::CorruptCache(format!("missing W-graph row {w}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(WGraph::from_parts(sys, lower, pe))
}

pub fn h_records(h: &HTable) -> Vec<Record> {
    h.pairs()
        .into_iter()
        .map(|(x, y)| Record::HEntry { x, y, terms: h.product(x, y).unwrap_or_default().to_vec() })
        .collect()
}

pub fn h_table_from_records(records: &[Record]) -> HTable {
    let mut h = HTable::new();
    for r in records {
        if let Record::HEntry { x, y, terms } = r {
            h.insert(*x, *y, terms.clone());
        }
    }
    h
}

/// Location of the W-graph cache of a group inside a cache directory.
pub fn wgraph_path(dir: &Path, sys: &CoxeterSystem) -> PathBuf {
    let name: String = sys
        .coxeter_type()
        .to_string()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    dir.join(format!("{name}.wgraph.hkc"))
}

/// Loads the W-graph from `dir` if present, otherwise computes and stores it.
pub fn load_or_build_wgraph(dir: Option<&Path>, sys: &CoxeterSystem, budget: &Budget) -> Result<WGraph> {
    let Some(dir) = dir else {
        return build_wgraph(sys, budget);
    };
    let path = wgraph_path(dir, sys);
    if path.exists() {
        let file = CacheFile::read(&path)?;
        file.check_type(sys)?;
        return wgraph_from_records(sys, &file.records);
    }
    let wg = build_wgraph(sys, budget)?;
    fs::create_dir_all(dir)?;
    let mut file = CacheFile::new(CacheHeader::new(sys));
    file.records = wgraph_records(&wg);
    file.write(&path)?;
    Ok(wg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::KlTable;
    use proptest::prelude::*;

    fn a3() -> (CoxeterSystem, WGraph) {
        let sys = CoxeterSystem::build("A3".parse().unwrap()).unwrap();
        let wg = build_wgraph(&sys, &Budget::unlimited()).unwrap();
        (sys, wg)
    }

    #[test]
    fn h_table_round_trip() {
        let (sys, wg) = a3();
        let all: Vec<ElemId> = (0..sys.len() as ElemId).collect();
        let h = HTable::build(&sys, &wg, &all, &all, &Budget::unlimited()).unwrap();
        let mut file = CacheFile::new(CacheHeader::new(&sys));
        file.records = h_records(&h);
        let bytes = file.to_bytes().unwrap();
        let back = CacheFile::from_bytes(&bytes).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_bytes().unwrap(), bytes);
        let h2 = h_table_from_records(&back.records);
        for (x, y) in h.pairs() {
            assert_eq!(h.product(x, y), h2.product(x, y));
        }
    }

    #[test]
    fn kl_expansion_and_wgraph_round_trip() {
        let (sys, wg) = a3();
        let kl = KlTable::build(&sys, &Budget::unlimited()).unwrap();
        let mut file = CacheFile::new(CacheHeader::new(&sys));
        file.records = (0..sys.len() as ElemId)
            .map(|w| Record::KlExpansion { w, terms: kl.kl_basis(&sys, w).expansion })
            .collect();
        file.records.extend(wgraph_records(&wg));
        let back = CacheFile::from_bytes(&file.to_bytes().unwrap()).unwrap();
        assert_eq!(back, file);
        assert_eq!(wgraph_from_records(&sys, &back.records).unwrap(), wg);
    }

    #[test]
    fn wrong_normalization_is_rejected() {
        let (sys, _) = a3();
        let mut file = CacheFile::new(CacheHeader::new(&sys));
        file.header.normalization = "kl-q".into();
        let err = CacheFile::from_bytes(&file.to_bytes().unwrap()).unwrap_err();
        assert!(matches!(err, Error::VersionMismatch(_)));
        file.header.normalization = NORMALIZATION.into();
        file.header.format_version = 99;
        assert!(matches!(CacheFile::from_bytes(&file.to_bytes().unwrap()), Err(Error::VersionMismatch(_))));
    }

    #[test]
    fn garbage_is_corrupt() {
        assert!(matches!(CacheFile::from_bytes(b"not a cache"), Err(Error::CorruptCache(_))));
        let (sys, _) = a3();
        let mut bytes = CacheFile::new(CacheHeader::new(&sys)).to_bytes().unwrap();
        bytes.extend_from_slice(&[9, 0, 0, 0, 0]);
        assert!(matches!(CacheFile::from_bytes(&bytes), Err(Error::CorruptCache(_))));
    }

    #[test]
    fn directory_cache_reuses_file() {
        let dir = tempfile::tempdir().unwrap();
        let (sys, wg) = a3();
        let built = load_or_build_wgraph(Some(dir.path()), &sys, &Budget::unlimited()).unwrap();
        assert_eq!(built, wg);
        let path = wgraph_path(dir.path(), &sys);
        assert!(path.exists());
        let loaded = load_or_build_wgraph(Some(dir.path()), &sys, &Budget::unlimited()).unwrap();
        assert_eq!(loaded, wg);
        let b3 = CoxeterSystem::build("B3".parse().unwrap()).unwrap();
        fs::copy(&path, wgraph_path(dir.path(), &b3)).unwrap();
        assert!(matches!(
            load_or_build_wgraph(Some(dir.path()), &b3, &Budget::unlimited()),
            Err(Error::VersionMismatch(_))
        ));
    }

    #[test]
    fn append_then_read() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.hkc");
        let (sys, wg) = a3();
        let file = CacheFile::new(CacheHeader::new(&sys));
        file.write(&path).unwrap();
        let recs = wgraph_records(&wg);
        CacheFile::append(&path, &recs[..10]).unwrap();
        CacheFile::append(&path, &recs[10..]).unwrap();
        let back = CacheFile::read(&path).unwrap();
        assert_eq!(back.records, recs);
    }

    proptest! {
        /// Truncating anywhere keeps exactly the records that were complete.
        #[test]
        fn truncation_keeps_complete_records(cut in 0usize..4000) {
            let (sys, wg) = a3();
            let mut file = CacheFile::new(CacheHeader::new(&sys));
            file.records = wgraph_records(&wg);
            let bytes = file.to_bytes().unwrap();
            let header_len = CacheFile::new(CacheHeader::new(&sys)).to_bytes().unwrap().len();
            let cut = header_len + cut % (bytes.len() - header_len + 1);
            let back = CacheFile::from_bytes(&bytes[..cut]).unwrap();
            // Oracle: re-encode prefixes until the next record would overflow.
            let mut expect = 0;
            let mut len = header_len;
            for r in &file.records {
                let mut b = Vec::new();
                encode_record(r, &mut b);
                if len + b.len() > cut { break; }
                len += b.len();
                expect += 1;
            }
            prop_assert_eq!(back.records.len(), expect);
            prop_assert_eq!(&back.records[..], &file.records[..expect]);
        }
    }
}
