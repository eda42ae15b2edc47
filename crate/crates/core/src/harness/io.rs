//! On-disk formats: algebra files, subuniverse files and corpus directories.
//!
//! Algebra file (JSON): `{"arity": n, "size": m, "table": [...], "labels": [...]}`
//! with a flat 0-based row-major table of length `m^n`; `labels` is optional
//! and display-only. Subuniverse file: `{"elements": [...]}`, sorted, 0-based.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::algebra::{Elem, NaryTable, Subuniverse};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub arity: usize,
    pub size: usize,
    pub table: Vec<Elem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl AlgebraFile {
    pub fn from_table(t: &NaryTable) -> Self {
        AlgebraFile {
            arity: t.arity(),
            size: t.size(),
            table: t.entries().to_vec(),
            labels: None,
        }
    }

    pub fn to_table(&self) -> Result<NaryTable, HarnessError> {
        if let Some(labels) = &self.labels {
            if labels.len() != self.size {
                return Err(HarnessError::Format(format!(
                    "{} labels for a carrier of size {}",
                    labels.len(),
                    self.size
                )));
            }
        }
        Ok(NaryTable::new(self.arity, self.size, self.table.clone())?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubFile {
    pub elements: Vec<Elem>,
}

impl SubFile {
    pub fn from_sub(s: &Subuniverse) -> Self {
        SubFile {
            elements: s.elements(),
        }
    }

    pub fn to_sub(&self, carrier_size: usize) -> Result<Subuniverse, HarnessError> {
        if self.elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HarnessError::Format(
                "subuniverse elements must be sorted and distinct".into(),
            ));
        }
        Ok(Subuniverse::from_elements(carrier_size, &self.elements)?)
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Format(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), HarnessError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

pub fn read_algebra(path: &Path) -> Result<NaryTable, HarnessError> {
    read_json::<AlgebraFile>(path)?.to_table()
}

pub fn write_algebra(path: &Path, table: &NaryTable) -> Result<(), HarnessError> {
    write_json(path, &AlgebraFile::from_table(table))
}

pub fn read_sub(path: &Path, carrier_size: usize) -> Result<Subuniverse, HarnessError> {
    read_json::<SubFile>(path)?.to_sub(carrier_size)
}

pub fn write_sub(path: &Path, sub: &Subuniverse) -> Result<(), HarnessError> {
    write_json(path, &SubFile::from_sub(sub))
}

pub const MANIFEST: &str = "manifest.json";

/// Corpus directory: `manifest.json` plus one algebra file per table,
/// `table-000000.json`, `table-000001.json`, ... in generation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusManifest {
    /// Free-form description of how the tables were produced.
    pub generator: serde_json::Value,
    pub table_count: usize,
    #[serde(default)]
    pub attempt_cap_exhausted: bool,
    pub tool_version: String,
}

pub fn table_file_name(index: usize) -> String {
    format!("table-{index:06}.json")
}

pub fn write_corpus(
    dir: &Path,
    generator: serde_json::Value,
    tables: &[NaryTable],
    attempt_cap_exhausted: bool,
) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    for (i, t) in tables.iter().enumerate() {
        write_algebra(&dir.join(table_file_name(i)), t)?;
    }
    let manifest = CorpusManifest {
        generator,
        table_count: tables.len(),
        attempt_cap_exhausted,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    write_json(&dir.join(MANIFEST), &manifest)
}

/// Reads a corpus directory. Without a manifest, every `*.json` file is a table, in name order.
pub fn read_corpus(dir: &Path) -> Result<(serde_json::Value, Vec<NaryTable>), HarnessError> {
    let manifest_path = dir.join(MANIFEST);
    let manifest: Option<CorpusManifest> = if manifest_path.exists() {
        Some(read_json(&manifest_path)?)
    } else {
        None
    };
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| HarnessError::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(|e| HarnessError::io(dir, e))?;
    files.retain(|p| p.extension().is_some_and(|x| x == "json") && p.file_name() != Some(MANIFEST.as_ref()));
    files.sort();
    let tables = files.iter().map(|p| read_algebra(p)).collect::<Result<Vec<_>, _>>()?;
    let generator = match manifest {
        Some(m) => {
            if m.table_count != tables.len() {
                return Err(HarnessError::Format(format!(
                    "manifest lists {} tables, directory has {}",
                    m.table_count,
                    tables.len()
                )));
            }
            m.generator
        }
        None => serde_json::json!({ "directory": dir.display().to_string() }),
    };
    Ok((generator, tables))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_file_is_bit_exact() {
        let text = r#"{"arity":2,"size":2,"table":[0,0,0,1],"labels":["bot","top"]}"#;
        let f: AlgebraFile = serde_json::from_str(text).unwrap();
        let t = f.to_table().unwrap();
        assert_eq!(t.apply(&[1, 1]), 1);
        assert_eq!(t.apply(&[0, 1]), 0);
        let back = serde_json::to_string(&AlgebraFile::from_table(&t)).unwrap();
        assert_eq!(back, r#"{"arity":2,"size":2,"table":[0,0,0,1]}"#);
    }

    #[test]
    fn rejects_bad_files() {
        let f: AlgebraFile = serde_json::from_str(r#"{"arity":2,"size":2,"table":[0,0,0]}"#).unwrap();
        assert!(f.to_table().is_err());
        let f: AlgebraFile =
            serde_json::from_str(r#"{"arity":2,"size":2,"table":[0,0,0,1],"labels":["a"]}"#).unwrap();
        assert!(f.to_table().is_err());
        let s = SubFile { elements: vec![1, 0] };
        assert!(s.to_sub(2).is_err());
        let s = SubFile { elements: vec![] };
        assert!(s.to_sub(2).is_err());
    }

    #[test]
    fn corpus_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let tables = vec![
            NaryTable::from_fn(2, 2, |x| x[0]).unwrap(),
            NaryTable::from_fn(3, 2, |x| x[2]).unwrap(),
        ];
        write_corpus(dir.path(), serde_json::json!({"kind": "test"}), &tables, false).unwrap();
        let (gen, back) = read_corpus(dir.path()).unwrap();
        assert_eq!(back, tables);
        assert_eq!(gen["kind"], "test");
        assert!(dir.path().join("table-000001.json").exists());
    }
}
