//! Curve files: JSON `{"closed":bool,"vertices":[[...],...]}` or CSV with one
//! vertex per row.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PolyCurve;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    #[serde(default)]
    pub closed: bool,
    pub vertices: Vec<Vec<f64>>,
}

impl CurveFile {
    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// CSV rows of coordinates; a header row is skipped when it does not parse
    /// as numbers.
    pub fn from_csv_str(text: &str, closed: bool) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut vertices = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(row) => vertices.push(row),
                Err(_) if i == 0 => continue,
                Err(_) => return Err(Error::Parse(format!("row {} is not numeric", i + 1))),
            }
        }
        Ok(CurveFile { closed, vertices })
    }

    /// Reads `.csv` files as CSV and everything else as JSON.
    pub fn read(path: &Path, closed_if_csv: bool) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            Self::from_csv_str(&text, closed_if_csv)
        } else {
            Self::from_json_str(&text)
        }
    }

    pub fn to_curve(&self) -> Result<PolyCurve> {
        PolyCurve::from_rows(&self.vertices, self.closed)
    }

    pub fn from_curve(c: &PolyCurve) -> Self {
        CurveFile { closed: c.closed, vertices: c.vertices.iter().map(|v| v.as_slice().to_vec()).collect() }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("curve serializes")
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        for v in &self.vertices {
            w.write_record(v.iter().map(|x| format!("{x:?}")))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}
