use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::CliError;

pub const TOOL: &str = "warpcone";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Header embedded in every artifact.
#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config_hash: String,
    pub gap_convention: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    meta: &'a Meta,
    result: &'a T,
}

/// Artifact writer for one command run.
pub struct Output {
    dir: PathBuf,
    pub meta: Meta,
    pub deterministic: bool,
    written: Vec<PathBuf>,
}

impl Output {
    pub fn new(dir: &Path, command: &str, config_hash: &str, deterministic: bool) -> Result<Output, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        let generated_at = if deterministic {
            None
        } else {
            SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
        };
        Ok(Output {
            dir: dir.to_path_buf(),
            meta: Meta {
                tool: TOOL,
                version: VERSION,
                command: command.into(),
                config_hash: config_hash.into(),
                gap_convention: "lambda2 of I - D^-1/2 A D^-1/2",
                generated_at,
            },
            deterministic,
            written: Vec::new(),
        })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn write(&mut self, name: &str, content: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let env = Envelope {
            meta: &self.meta,
            result: value,
        };
        let mut text = serde_json::to_string_pretty(&env).map_err(|e| CliError::Io(e.to_string()))?;
        text.push('\n');
        self.write(name, &text)
    }

    /// One-line header for text formats, after the given comment marker.
    pub fn header(&self, marker: &str) -> String {
        let mut h = format!(
            "{marker} tool={} version={} command={} config_hash={}",
            self.meta.tool, self.meta.version, self.meta.command, self.meta.config_hash
        );
        if let Some(ts) = self.meta.generated_at {
            h.push_str(&format!(" generated_at={ts}"));
        }
        h.push('\n');
        h
    }

    /// CSV with a `#` header line; `rows` are written with the `csv` crate.
    pub fn csv(&mut self, name: &str, columns: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(columns).map_err(io)?;
        for row in rows {
            w.write_record(row).map_err(io)?;
        }
        let body = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        let text = self.header("#") + &String::from_utf8(body).expect("csv is utf-8");
        self.write(name, &text)
    }

    pub fn text(&mut self, name: &str, marker: &str, body: &str) -> Result<(), CliError> {
        let text = self.header(marker) + body;
        self.write(name, &text)
    }
}

/// Shortest decimal form that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
