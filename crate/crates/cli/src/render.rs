use std::io::{self, Write};

use serde::Serialize;

use crate::Format;

/// A command's result in every output format.
pub struct Output {
    pub json: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub pretty: String,
    pub exit: u8,
    /// Lines for stderr, printed after the data.
    pub diagnostics: Vec<String>,
}

impl Output {
    pub fn new(value: &impl Serialize, header: Vec<&'static str>, rows: Vec<Vec<String>>, pretty: String) -> Self {
        Self {
            json: serde_json::to_string_pretty(value).expect("reports serialize"),
            header,
            rows,
            pretty,
            exit: 0,
            diagnostics: Vec::new(),
        }
    }

    pub fn with_exit(mut self, exit: u8) -> Self {
        self.exit = exit;
        self
    }

    pub fn emit(&self, format: Format) -> io::Result<()> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        match format {
            Format::Json => writeln!(out, "{}", self.json),
            Format::Pretty => write!(out, "{}", self.pretty),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
        }
    }
}

/// 17 significant digits, as in CSV and pretty output.
pub fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn opt_float(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}
