use std::io::Write;
use std::path::Path;

use releq::io::{csv_string, format_sig, write_atomic, Cell};

use crate::Failure;

pub enum Payload {
    /// `(quantity, value, unit)` rows: `name = value unit` lines on stdout,
    /// CSV `quantity,value,units` in a file.
    Quantities(Vec<(String, f64, String)>),
    Csv { header: Vec<&'static str>, rows: Vec<Vec<Cell>> },
    Json(serde_json::Value),
    Text(String),
}

pub struct Report {
    /// Extra `#` lines printed after the config echo.
    pub notes: Vec<String>,
    pub payload: Payload,
    /// False turns the exit status to 1 (only `selftest` uses it).
    pub ok: bool,
}

impl Report {
    pub fn new(payload: Payload) -> Self {
        Self { notes: Vec::new(), payload, ok: true }
    }

    pub fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }

    fn render(&self, to_file: bool) -> Result<String, Failure> {
        Ok(match &self.payload {
            Payload::Quantities(q) if to_file => {
                let rows: Vec<Vec<Cell>> = q
                    .iter()
                    .map(|(name, v, unit)| vec![Cell::from(name.as_str()), Cell::from(*v), Cell::from(unit.as_str())])
                    .collect();
                csv_string(&["quantity", "value", "units"], &rows)?
            }
            Payload::Quantities(q) => {
                let width = q.iter().map(|(n, _, _)| n.len()).max().unwrap_or(0);
                q.iter()
                    .map(|(n, v, u)| {
                        let sep = if u.is_empty() { "" } else { " " };
                        format!("{n:<width$} = {}{sep}{u}\n", human(*v))
                    })
                    .collect()
            }
            Payload::Csv { header, rows } => csv_string(header, rows)?,
            Payload::Json(v) => serde_json::to_string_pretty(v).map_err(Failure::invalid)? + "\n",
            Payload::Text(t) => t.clone(),
        })
    }

    pub fn emit(&self, config: &str, out: Option<&Path>) -> Result<(), Failure> {
        let mut head = format!("# releq {config}\n");
        for n in &self.notes {
            head.push_str(&format!("# {n}\n"));
        }
        let body = self.render(out.is_some())?;
        let stdout = match out {
            Some(path) => {
                write_atomic(path, body.as_bytes())?;
                head
            }
            None => head + &body,
        };
        std::io::stdout().lock().write_all(stdout.as_bytes()).map_err(Failure::invalid)
    }
}

/// Four decimals for moderate magnitudes, the file format otherwise.
pub fn human(x: f64) -> String {
    if x == 0.0 || (x.is_finite() && (1e-3..1e6).contains(&x.abs())) {
        format!("{x:.4}")
    } else {
        format_sig(x)
    }
}
