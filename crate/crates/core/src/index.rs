//! Format-agnostic loading and querying of saved indexes.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::diversity::ScoreRecord;
use crate::error::{Error, Result};
use crate::gct::{gct_score, gct_topr_with, GctFile, GctIndex};
use crate::graph::VertexId;
use crate::search::{SearchOptions, TopRResult};
use crate::tsd::{tsd_score, tsd_topr_with, TsdFile, TsdIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexKind {
    Tsd,
    Gct,
}

impl IndexKind {
    pub fn name(self) -> &'static str {
        match self {
            IndexKind::Tsd => "tsd",
            IndexKind::Gct => "gct",
        }
    }
}

#[derive(Clone, Debug)]
pub enum AnyIndex {
    Tsd(TsdIndex),
    Gct(GctIndex),
}

impl AnyIndex {
    pub fn kind(&self) -> IndexKind {
        match self {
            AnyIndex::Tsd(_) => IndexKind::Tsd,
            AnyIndex::Gct(_) => IndexKind::Gct,
        }
    }

    pub fn vertex(&self, label: u64) -> Result<VertexId> {
        match self {
            AnyIndex::Tsd(i) => i.vertex(label),
            AnyIndex::Gct(i) => i.vertex(label),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyIndex::Tsd(i) => i.n(),
            AnyIndex::Gct(i) => i.n(),
        }
    }

    pub fn storage_units(&self) -> usize {
        match self {
            AnyIndex::Tsd(i) => i.storage_units(),
            AnyIndex::Gct(i) => i.storage_units(),
        }
    }

    pub fn score(&self, v: VertexId, k: u32) -> Result<ScoreRecord> {
        match self {
            AnyIndex::Tsd(i) => tsd_score(i, v, k),
            AnyIndex::Gct(i) => gct_score(i, v, k),
        }
    }

    pub fn topr(&self, r: usize, k: u32, opts: SearchOptions) -> Result<TopRResult> {
        match self {
            AnyIndex::Tsd(i) => tsd_topr_with(i, r, k, opts),
            AnyIndex::Gct(i) => gct_topr_with(i, r, k, opts),
        }
    }

    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut out = BufWriter::new(file);
        match self {
            AnyIndex::Tsd(i) => i.write_json(&mut out)?,
            AnyIndex::Gct(i) => i.write_json(&mut out)?,
        }
        out.flush()?;
        Ok(())
    }
}

/// Reads a saved index, dispatching on its `format` field.
pub fn load_index<P: AsRef<Path>>(path: P) -> Result<AnyIndex> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let value: serde_json::Value = serde_json::from_reader(BufReader::new(file))?;
    let bad = |e: serde_json::Error| Error::IndexFormat(e.to_string());
    match value.get("format").and_then(|f| f.as_str()) {
        Some("tsd") => Ok(AnyIndex::Tsd(TsdIndex::from_file(
            serde_json::from_value::<TsdFile>(value).map_err(bad)?,
        )?)),
        Some("gct") => Ok(AnyIndex::Gct(GctIndex::from_file(
            serde_json::from_value::<GctFile>(value).map_err(bad)?,
        )?)),
        Some(other) => Err(Error::IndexFormat(format!("unknown format {other:?}"))),
        None => Err(Error::IndexFormat("missing format field".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::fig1_full;

    #[test]
    fn save_and_load_both_kinds() {
        let g = fig1_full();
        let dir = tempfile::tempdir().unwrap();
        for idx in [
            AnyIndex::Tsd(crate::tsd::build_tsd(&g).unwrap()),
            AnyIndex::Gct(crate::gct::build_gct(&g).unwrap()),
        ] {
            let path = dir.path().join(idx.kind().name());
            idx.save(&path).unwrap();
            let back = load_index(&path).unwrap();
            assert_eq!(back.kind(), idx.kind());
            let v = back.vertex(0).unwrap();
            assert_eq!(back.score(v, 4).unwrap().score, 3);
        }
    }

    #[test]
    fn unknown_format_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.json");
        std::fs::write(&path, r#"{"format":"csr","vertices":[]}"#).unwrap();
        assert!(matches!(load_index(&path), Err(Error::IndexFormat(_))));
    }
}
