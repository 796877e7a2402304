use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use clap::ValueEnum;
use serde_json::{json, Value};

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const PARSE: u8 = 1;
    pub const NON_CONVERGED: u8 = 2;
    pub const INFEASIBLE: u8 = 3;
    pub const HYPOTHESIS: u8 = 4;
    pub const CHECK_FAILED: u8 = 5;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Settings shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    pub seed: u64,
    pub no_meta: bool,
}

impl Ctx {
    /// Adds a `meta` object unless `--no-meta` was given.
    pub fn wrap(&self, mut body: Value) -> Value {
        if !self.no_meta {
            let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            if let Value::Object(map) = &mut body {
                map.insert(
                    "meta".into(),
                    json!({"tool": "curvlab", "version": env!("CARGO_PKG_VERSION"), "seed": self.seed, "unix_time": now}),
                );
            }
        }
        body
    }

    pub fn json_text(&self, body: Value) -> String {
        let mut s = serde_json::to_string_pretty(&self.wrap(body)).expect("json value serializes");
        s.push('\n');
        s
    }
}

/// Writes to `out` when given, stdout otherwise.
pub fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// One header row and one data row.
pub fn csv_row(fields: &[(&str, String)]) -> String {
    let head: Vec<&str> = fields.iter().map(|f| f.0).collect();
    let vals: Vec<&str> = fields.iter().map(|f| f.1.as_str()).collect();
    format!("{}\n{}\n", head.join(","), vals.join(","))
}

pub fn read_text(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Seeds in decimal or `0x` hexadecimal.
pub fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}
