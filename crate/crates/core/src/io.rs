//! CSV reading and writing for series, price lists and estimates.

use std::path::Path;

use crate::error::{Error, Result};
use crate::estimation::HurstEstimate;
use crate::series::TimeSeries;

/// `t,x` header followed by one row per sample; values use shortest round-trip formatting.
pub fn series_to_csv(x: &TimeSeries) -> String {
    let mut out = String::with_capacity(x.len() * 40 + 4);
    out.push_str("t,x\n");
    for (t, v) in x.times().iter().zip(x.values()) {
        out.push_str(&format!("{t},{v}\n"));
    }
    out
}

/// Numeric rows of a CSV text; a first row that is not fully numeric is taken as a header.
fn numeric_rows(text: &str, min_cols: usize) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Data(format!("malformed CSV: {e}")))?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() < min_cols {
            return Err(Error::Data(format!(
                "line {line}: expected at least {min_cols} column(s), found {}",
                record.len()
            )));
        }
        let parsed: std::result::Result<Vec<f64>, usize> = record
            .iter()
            .take(min_cols)
            .enumerate()
            .map(|(c, s)| s.parse::<f64>().map_err(|_| c))
            .collect();
        match parsed {
            Ok(v) => rows.push(v),
            Err(_) if i == 0 => continue,
            Err(c) => {
                return Err(Error::Data(format!(
                    "line {line}, column {}: cannot parse `{}` as a number",
                    c + 1,
                    &record[c]
                )))
            }
        }
    }
    Ok(rows)
}

/// Parse a series from the first two columns (time, value), with or without a header.
pub fn series_from_csv(text: &str) -> Result<TimeSeries> {
    let rows = numeric_rows(text, 2)?;
    let (t, x) = rows.into_iter().map(|r| (r[0], r[1])).unzip();
    TimeSeries::new(t, x)
}

/// Prices from a single-column CSV, or the second column of a `t,x` table.
pub fn prices_from_csv(text: &str) -> Result<Vec<f64>> {
    let first_data = text.lines().find(|l| {
        l.trim().split(',').all(|f| f.trim().parse::<f64>().is_ok()) && !l.trim().is_empty()
    });
    let cols = first_data.map_or(1, |l| l.split(',').count());
    let rows = numeric_rows(text, cols.min(2))?;
    let col = cols.min(2) - 1;
    Ok(rows.into_iter().map(|r| r[col]).collect())
}

/// `interval_start,raw,smoothed` table; the smoothed column is empty when absent.
pub fn estimate_to_csv(e: &HurstEstimate) -> String {
    let mut out = String::from("interval_start,raw,smoothed\n");
    for (i, (t, r)) in e.interval_starts.iter().zip(&e.raw).enumerate() {
        match &e.smoothed {
            Some(s) => out.push_str(&format!("{t},{r},{}\n", s[i])),
            None => out.push_str(&format!("{t},{r},\n")),
        }
    }
    out
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
