use anyhow::Result;
use serde_json::Value;

use crate::args::Format;

/// A command's table, its JSON form, and the checks that failed.
pub struct Report {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
    pub json: Value,
    pub failures: Vec<Value>,
}

impl Report {
    pub fn new(headers: &[&str]) -> Self {
        Report {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            json: Value::Null,
            failures: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.headers.len());
        self.rows.push(cells);
    }

    pub fn fail(&mut self, what: Value) {
        self.failures.push(what);
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.headers)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                Ok(String::from_utf8(w.into_inner()?)?)
            }
            Format::Json => Ok(serde_json::to_string_pretty(&self.json)? + "\n"),
            Format::Pretty => Ok(self.pretty()),
        }
    }

    /// Left-aligned columns separated by two spaces; empty cells shown as `-`.
    fn pretty(&self) -> String {
        let cell = |s: &str| if s.is_empty() { "-".to_string() } else { s.to_string() };
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell(c).chars().count());
            }
        }
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| {
                    let c = cell(c);
                    let pad = w - c.chars().count();
                    format!("{c}{}", " ".repeat(pad))
                })
                .collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.headers);
        for r in &self.rows {
            out.push_str(&line(r));
        }
        out
    }
}
