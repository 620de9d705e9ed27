//! Staged outputs and run manifests.
//!
//! Commands queue every output in memory; nothing touches the disk until the
//! command has succeeded, and each file is then written through a temporary
//! sibling and renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    format_versions: FormatVersions,
    command: &'a str,
    config: &'a C,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    status: &'static str,
}

#[derive(Serialize)]
struct FormatVersions {
    tokens: u32,
    embeddings: u32,
    graph_cache: u32,
    checkpoint: u32,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub struct Run {
    command: &'static str,
    inputs: Vec<(PathBuf, Vec<u8>)>,
    outputs: Vec<(PathBuf, Vec<u8>)>,
}

impl Run {
    pub fn new(command: &'static str) -> Self {
        Run {
            command,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    /// Reads an input file and records it for the manifest digest.
    pub fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        if !self.inputs.iter().any(|(p, _)| p == path) {
            self.inputs.push((path.to_path_buf(), bytes.clone()));
        }
        Ok(bytes)
    }

    pub fn read_string(&mut self, path: &Path) -> Result<String> {
        String::from_utf8(self.read(path)?)
            .with_context(|| format!("{} is not valid UTF-8", path.display()))
    }

    pub fn write(&mut self, path: impl Into<PathBuf>, bytes: impl Into<Vec<u8>>) {
        self.outputs.push((path.into(), bytes.into()));
    }

    /// Writes every staged output plus the manifest next to the first output.
    pub fn commit<C: Serialize>(self, config: &C) -> Result<PathBuf> {
        let Some((first, _)) = self.outputs.first() else {
            bail!("{} produced no output", self.command);
        };
        let manifest_path = manifest_path(first);
        for (out, _) in self.outputs.iter().chain([(manifest_path.clone(), Vec::new())].iter()) {
            for (inp, _) in &self.inputs {
                if same_file(out, inp) {
                    bail!("output {} would overwrite an input", out.display());
                }
            }
        }
        let digest = |files: &[(PathBuf, Vec<u8>)]| {
            files
                .iter()
                .map(|(p, b)| FileDigest {
                    path: p.display().to_string(),
                    sha256: sha256_hex(b),
                })
                .collect()
        };
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            format_versions: FormatVersions {
                tokens: tabgraph::doc_model::TOKENS_FORMAT_VERSION,
                embeddings: tabgraph::repr_embed::vocab::EMBEDDINGS_FORMAT_VERSION,
                graph_cache: tabgraph::graph_builder::graph::GRAPH_CACHE_VERSION,
                checkpoint: tabgraph::gnn::CHECKPOINT_VERSION,
            },
            command: self.command,
            config,
            inputs: digest(&self.inputs),
            outputs: digest(&self.outputs),
            status: "success",
        };
        let mut json = serde_json::to_vec_pretty(&manifest)?;
        json.push(b'\n');
        for (path, bytes) in &self.outputs {
            write_atomic(path, bytes)?;
        }
        write_atomic(&manifest_path, &json)?;
        Ok(manifest_path)
    }
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_else(|| "run".into());
    name.push(".manifest.json");
    output.with_file_name(name)
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}
