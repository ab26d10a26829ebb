use std::path::Path;

use crate::error::Result;

/// Floats in CSV output: 17 significant digits, scientific notation.
pub fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub(crate) fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

pub(crate) trait Record {
    fn record(&self) -> Vec<String>;
}

/// A header plus string records; the single results format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub(crate) fn from_rows<R: Record>(header: &[&str], rows: &[R]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: rows.iter().map(Record::record).collect(),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()?)?;
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// Removes one named column from CSV text (used to compare runs without
/// `runtime_ms`).
pub fn strip_column(csv_text: &str, name: &str) -> Result<String> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(csv_text.as_bytes());
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut drop = None;
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        if line == 0 {
            drop = record.iter().position(|h| h == name);
        }
        let kept: Vec<&str> = record.iter().enumerate().filter(|(i, _)| Some(*i) != drop).map(|(_, f)| f).collect();
        writer.write_record(kept)?;
    }
    let bytes = writer.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
