//! Deterministic output formatting: CSV with 12 significant digits, complex
//! vectors as `[re, im]` pairs, stdout-or-file writing.

use std::path::Path;

use darkmode_lab::dynamics::CoolingResult;
use darkmode_lab::CVector;

/// 12 significant digits; enough to diff and to round-trip visually.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

pub struct Csv {
    lines: Vec<String>,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        Self {
            lines: vec![header.to_string()],
        }
    }

    /// Fixed cooling header: `param1,param2,stable,n_f_1..n_f_N,dark_count`.
    pub fn cooling_header(n: usize) -> Self {
        let mut header = String::from("param1,param2,stable");
        for j in 1..=n {
            header.push_str(&format!(",n_f_{j}"));
        }
        header.push_str(",dark_count");
        Self::new(&header)
    }

    pub fn push_fields(&mut self, fields: &[String]) {
        self.lines.push(fields.join(","));
    }

    /// One cooling row; unstable points carry empty phonon columns.
    pub fn cooling_row(
        &mut self,
        param1: Option<f64>,
        param2: Option<f64>,
        out: &CoolingResult<f64>,
        dark_count: usize,
        n: usize,
    ) {
        let mut fields = Vec::with_capacity(n + 4);
        fields.push(param1.map(sig12).unwrap_or_default());
        fields.push(param2.map(sig12).unwrap_or_default());
        fields.push(out.stable.to_string());
        match &out.n_f {
            Some(n_f) => {
                for j in 0..n {
                    fields.push(sig12(n_f[j]));
                }
            }
            None => {
                for _ in 0..n {
                    fields.push(String::new());
                }
            }
        }
        fields.push(dark_count.to_string());
        self.push_fields(&fields);
    }

    pub fn finish(self) -> String {
        self.lines.join("\n") + "\n"
    }
}

/// Complex vectors as nested `[re, im]` arrays for JSON reports.
pub fn cvecs(vs: &[CVector<f64>]) -> Vec<Vec<[f64; 2]>> {
    vs.iter()
        .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn write_output(out: Option<&Path>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
