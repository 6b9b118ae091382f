//! Artifact directory: every file written through it is hashed into
//! `manifest.json`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use ifslab_core::attractor::io::fmt_f64;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
struct ManifestEntry {
    path: String,
    sha256: String,
    bytes: usize,
}

#[derive(Serialize)]
struct Manifest {
    tool_version: &'static str,
    files: Vec<ManifestEntry>,
}

pub struct OutDir {
    root: PathBuf,
    entries: Vec<ManifestEntry>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("cannot create {}", root.display()))?;
        Ok(Self { root: root.to_path_buf(), entries: Vec::new() })
    }

    /// Writes `name` (relative to the root) and records its hash.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
        self.entries.retain(|e| e.path != name);
        self.entries.push(ManifestEntry { path: name.to_string(), sha256: hex::encode(Sha256::digest(bytes)), bytes: bytes.len() });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// Names written so far, in order.
    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.path.clone()).collect()
    }

    pub fn finish(mut self) -> Result<()> {
        self.entries.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = Manifest { tool_version: ifslab_core::report::TOOL_VERSION, files: self.entries };
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(self.root.join("manifest.json"), text)?;
        Ok(())
    }
}

/// CSV builder with the fixed float format.
pub struct Csv {
    text: String,
}

pub enum Field {
    Num(f64),
    Int(usize),
    Text(String),
    Empty,
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Num(x)
    }
}

impl From<usize> for Field {
    fn from(x: usize) -> Self {
        Field::Int(x)
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(x: Option<T>) -> Self {
        x.map_or(Field::Empty, Into::into)
    }
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { text: header.join(",") + "\n" }
    }

    pub fn row(&mut self, fields: Vec<Field>) {
        let cells: Vec<String> = fields
            .into_iter()
            .map(|f| match f {
                Field::Num(x) => fmt_f64(x),
                Field::Int(n) => n.to_string(),
                Field::Text(s) => s,
                Field::Empty => String::new(),
            })
            .collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.text.into_bytes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_lists_hashes() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = OutDir::create(dir.path()).unwrap();
        out.write("b.txt", b"abc").unwrap();
        out.write("a.txt", b"").unwrap();
        out.finish().unwrap();
        let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
        assert_eq!(m["files"][0]["path"], "a.txt");
        assert_eq!(m["files"][1]["sha256"], "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn csv_fields() {
        let mut c = Csv::new(&["t", "status", "gap"]);
        c.row(vec![0.5.into(), "unresolved".into(), Field::from(None::<f64>)]);
        assert_eq!(String::from_utf8(c.into_bytes()).unwrap(), "t,status,gap\n5.0000000000000000e-1,unresolved,\n");
    }
}
