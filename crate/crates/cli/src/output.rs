//! CSV emission: `#` metadata lines, one header row, floats in shortest
//! round-trip form.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn config_hash(canonical: &str) -> String {
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// Round-trip float text. Non-finite values print as `nan`/`inf`/`-inf`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:e}")
    }
}

pub struct Table {
    meta: Vec<(String, String)>,
    header: Vec<String>,
    rows: String,
}

impl Table {
    pub fn new(mode: &str, hash: &str, units: &str, header: Vec<String>) -> Self {
        Self {
            meta: vec![
                ("version".into(), format!("polariton {VERSION}")),
                ("mode".into(), mode.into()),
                ("config_sha256".into(), hash.into()),
                ("units".into(), units.into()),
            ],
            header,
            rows: String::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.meta.push((key.into(), value.into()));
        self
    }

    pub fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.header.len());
        let line: Vec<String> = values.iter().map(|v| num(*v)).collect();
        self.rows.push_str(&line.join(","));
        self.rows.push('\n');
    }

    /// Row of preformatted cells.
    pub fn text_row(&mut self, cells: &[String]) {
        self.rows.push_str(&cells.join(","));
        self.rows.push('\n');
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        out.push_str(&self.rows);
        out
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        fs::write(path, self.render())
    }
}
