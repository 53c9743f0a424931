//! CSV and JSON writers. CSV values use 17 significant digits so identical
//! inputs give byte-identical files.

use serde_json::Value;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(comment: &str, columns: &[&str]) -> Self {
        let mut text = String::new();
        for line in comment.lines() {
            writeln!(text, "# {line}").unwrap();
        }
        writeln!(text, "{}", columns.join(",")).unwrap();
        Csv { text }
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&v| num(v)).collect();
        writeln!(self.text, "{}", cells.join(",")).unwrap();
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("stdout: {e}")),
    }
}

/// `<out>.json`, next to a CSV written at `out`.
pub fn sidecar(out: &Path, meta: &Value) -> Result<(), String> {
    let mut p = out.as_os_str().to_owned();
    p.push(".json");
    let text = serde_json::to_string_pretty(meta).expect("metadata serializes");
    std::fs::write(&p, text + "\n").map_err(|e| format!("{}: {e}", Path::new(&p).display()))
}
