use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// CSV builder: header row, comma separated, floats with 17 significant
/// digits in scientific notation so output never depends on locale.
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Csv { text, columns: header.len() }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        debug_assert_eq!(cells.len(), self.columns);
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            match cell {
                Cell::F(x) => write!(self.text, "{x:.16e}"),
                Cell::U(n) => write!(self.text, "{n}"),
            }
            .expect("writing to a String cannot fail");
        }
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

pub enum Cell {
    F(f64),
    U(u64),
}

/// Parameters and provenance of one output file.
pub struct Manifest {
    pub subcommand: &'static str,
    pub params: Map<String, Value>,
    pub seed: Option<u64>,
}

impl Manifest {
    pub fn new(subcommand: &'static str) -> Self {
        Manifest { subcommand, params: Map::new(), seed: None }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    fn to_json(&self, body: &str) -> String {
        let digest = Sha256::digest(body.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        let doc = json!({
            "subcommand": self.subcommand,
            "params": self.params,
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
            "sha256": hex,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("manifest is valid JSON");
        text.push('\n');
        text
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes `body` to `out` plus its manifest sidecar, or to stdout.
pub fn emit(body: &str, manifest: &Manifest, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, body)?;
            fs::write(manifest_path(path), manifest.to_json(body))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()
        }
    }
}
