use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Per-run output directory. Files are created, never replaced.
pub struct RunDir {
    path: PathBuf,
    subcommand: &'static str,
    started: Instant,
    inputs: BTreeMap<String, String>,
    outputs: Vec<String>,
}

#[derive(Serialize)]
struct RunManifest<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'a str,
    seed: u64,
    threads: Option<usize>,
    config: &'a C,
    /// SHA-256 of every input file, keyed by path as given.
    inputs: &'a BTreeMap<String, String>,
    outputs: &'a [String],
    duration_seconds: f64,
}

impl RunDir {
    pub fn create(path: &Path, subcommand: &'static str) -> anyhow::Result<RunDir> {
        if path.exists() {
            if !path.is_dir() {
                bail!(
                    "output path {} exists and is not a directory",
                    path.display()
                );
            }
            let mut entries =
                fs::read_dir(path).with_context(|| format!("reading {}", path.display()))?;
            if entries.next().is_some() {
                bail!(
                    "output directory {} is not empty; choose a new directory for each run",
                    path.display()
                );
            }
        }
        fs::create_dir_all(path).with_context(|| format!("creating {}", path.display()))?;
        Ok(RunDir {
            path: path.to_path_buf(),
            subcommand,
            started: Instant::now(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
        })
    }

    /// Records the digest of an input file.
    pub fn input(&mut self, path: &Path) -> anyhow::Result<()> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.insert(
            path.display().to_string(),
            hex::encode(Sha256::digest(&bytes)),
        );
        Ok(())
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> anyhow::Result<()> {
        let target = self.path.join(name);
        let mut file = OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&target)
            .with_context(|| format!("creating {}", target.display()))?;
        file.write_all(contents)
            .with_context(|| format!("writing {}", target.display()))?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> anyhow::Result<()> {
        let text = snpcut::numfmt::to_json_string(value)?;
        self.write(name, text.as_bytes())
    }

    pub fn write_with(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
    ) -> anyhow::Result<()> {
        let mut buf = Vec::new();
        f(&mut buf)?;
        self.write(name, &buf)
    }

    /// Writes `manifest.json`; call last.
    pub fn finish<C: Serialize>(
        mut self,
        config: &C,
        seed: u64,
        threads: Option<usize>,
    ) -> anyhow::Result<()> {
        let outputs = self.outputs.clone();
        let manifest = RunManifest {
            tool: "snpcut",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: self.subcommand,
            seed,
            threads,
            config,
            inputs: &self.inputs,
            outputs: &outputs,
            duration_seconds: self.started.elapsed().as_secs_f64(),
        };
        let text = snpcut::numfmt::to_json_string(&manifest)?;
        self.write("manifest.json", text.as_bytes())
    }
}
