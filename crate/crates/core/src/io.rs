//! JSON and CSV file I/O. Every write goes to a sibling temp file that is
//! renamed into place.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qentropy::Ensemble;
use crate::qstate::DensityMatrix;

pub const SIG_DIGITS: usize = 10;

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), message: source.to_string() }
}

fn parse_err(path: &Path, message: impl ToString) -> Error {
    Error::Parse { path: path.display().to_string(), message: message.to_string() }
}

/// Write `bytes` to `path` through a temp file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| parse_err(path, "not a file path"))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
    f.write_all(bytes).and_then(|_| f.sync_all()).map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(path, e)
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| parse_err(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| parse_err(path, e))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

#[derive(Serialize, Deserialize)]
struct EnsembleMember {
    p: f64,
    state: DensityMatrix,
}

/// Ensemble JSON: `{"ensemble":[{"p":..., "state":{density matrix}}, ...]}`.
#[derive(Serialize, Deserialize)]
pub struct EnsembleFile {
    ensemble: Vec<EnsembleMember>,
}

impl EnsembleFile {
    pub fn from_ensemble(e: &Ensemble) -> Self {
        let ensemble = e.items().iter().map(|(p, s)| EnsembleMember { p: *p, state: s.clone() }).collect();
        Self { ensemble }
    }

    pub fn into_ensemble(self) -> Result<Ensemble> {
        Ensemble::new(self.ensemble.into_iter().map(|m| (m.p, m.state)).collect())
    }
}

pub fn read_ensemble(path: &Path) -> Result<Ensemble> {
    read_json::<EnsembleFile>(path)?.into_ensemble()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Ten significant digits; positional notation for moderate magnitudes and
/// scientific otherwise.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return format!("{:.*}", SIG_DIGITS - 1, 0.0);
    }
    // The exponent after rounding to SIG_DIGITS, so 0.99999999999 becomes 1.000000000.
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').expect("exponent marker") + 1..].parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_sig(*x),
            Cell::Text(s) => s.clone(),
        }
    }
}

pub fn csv_string(header: &[&str], rows: &[Vec<Cell>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let bad = |e: csv::Error| Error::Parse { path: "<csv>".into(), message: e.to_string() };
    w.write_record(header).map_err(bad)?;
    for (i, row) in rows.iter().enumerate() {
        if row.len() != header.len() {
            let message = format!("row {i} has {} cells, header has {}", row.len(), header.len());
            return Err(Error::Parse { path: "<csv>".into(), message });
        }
        w.write_record(row.iter().map(Cell::render)).map_err(bad)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse { path: "<csv>".into(), message: e.to_string() })?;
    Ok(String::from_utf8(bytes).expect("rendered cells are UTF-8"))
}

/// Header plus rows, newline terminated, written atomically.
pub fn emit_csv(path: &Path, header: &[&str], rows: &[Vec<Cell>]) -> Result<()> {
    write_atomic(path, csv_string(header, rows)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::Ket;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.0), "1.000000000");
        assert_eq!(format_sig(0.0), "0.000000000");
        assert_eq!(format_sig(-0.125), "-0.1250000000");
        assert_eq!(format_sig(1234.5), "1234.500000");
        assert_eq!(format_sig(1.5e24), "1.500000000e24");
        assert_eq!(format_sig(f64::INFINITY), "inf");
        assert_eq!(format_sig(0.9999999999999996), "1.000000000");
        assert_eq!(format_sig(9.9999999999e-6), "0.00001000000000");
        assert_eq!(format_sig(9.9999999999e-7), "1.000000000e-6");
    }

    #[test]
    fn csv_layout() {
        let empty = csv_string(&["k", "I_MC", "bound"], &[]).unwrap();
        assert_eq!(empty, "k,I_MC,bound\n");
        let rows = vec![vec![Cell::from(0usize), Cell::from(0.5), Cell::from("x")]];
        assert_eq!(csv_string(&["a", "b", "c"], &rows).unwrap(), "a,b,c\n0,0.5000000000,x\n");
        assert!(csv_string(&["a"], &rows).is_err());
    }

    #[test]
    fn files_round_trip() {
        let dir = std::env::temp_dir().join(format!("releq-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.csv");
        let rows = vec![vec![Cell::from(1usize), Cell::from(2.0)]];
        emit_csv(&path, &["x", "y"], &rows).unwrap();
        let first = fs::read(&path).unwrap();
        emit_csv(&path, &["x", "y"], &rows).unwrap();
        assert_eq!(first, fs::read(&path).unwrap());

        let e = Ensemble::uniform(vec![
            Ket::basis(0, vec![2]).unwrap().to_density(),
            DensityMatrix::maximally_mixed(vec![2]),
        ])
        .unwrap();
        let jpath = dir.join("e.json");
        write_json(&jpath, &EnsembleFile::from_ensemble(&e)).unwrap();
        let back = read_ensemble(&jpath).unwrap();
        assert_eq!(back.len(), 2);
        assert!(read_json::<DensityMatrix>(&dir.join("missing.json")).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }
}
