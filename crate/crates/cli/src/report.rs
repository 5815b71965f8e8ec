use std::fmt::Write as _;
use std::path::PathBuf;

use eigenbound_core::rational::{format_float, format_rational};
use eigenbound_core::Rational;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub enum Failure {
    Core(eigenbound_core::Error),
    Io(PathBuf, std::io::Error),
}

impl From<eigenbound_core::Error> for Failure {
    fn from(e: eigenbound_core::Error) -> Self {
        Failure::Core(e)
    }
}

/// Envelope for every `--json` output.
#[derive(Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    /// SHA-256 of the canonical JSON form of the input.
    pub input_sha256: String,
    pub result: Value,
}

impl RunReport {
    pub fn new(argv: &[String], canonical_input: &str, result: Value) -> Self {
        Self {
            tool: "eigenbound",
            version: env!("CARGO_PKG_VERSION"),
            command: argv.to_vec(),
            input_sha256: sha256_hex(canonical_input.as_bytes()),
            result,
        }
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// `"p/q ≈ 1.234567890"`, or just the float when no exact value is known.
pub fn exact_and_float(exact: Option<&Rational>, x: f64) -> String {
    match exact {
        Some(q) if q.denom() == &1.into() => format_rational(q),
        Some(q) => format!("{} ≈ {}", format_rational(q), format_float(x)),
        None => format_float(x),
    }
}

pub fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format_float(*x)).collect();
    format!("({})", parts.join(", "))
}

/// Aligned `key  value` lines.
pub struct Table(Vec<(String, String)>);

impl Table {
    pub fn new() -> Self {
        Table(Vec::new())
    }

    pub fn row(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.0.push((key.into(), value.into()));
        self
    }

    pub fn render(&self) -> String {
        let width = self.0.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        self.0
            .iter()
            .map(|(k, v)| format!("{k:<width$}  {v}"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}
