//! `time,value` CSV input.

use crate::error::{CliError, CliResult};
use robustge::Sample;
use serde::Serialize;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub times: Vec<f64>,
    pub sample: Sample,
    /// Rows skipped because the value was empty or `NA`.
    pub dropped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct DatasetSummary {
    pub path: String,
    pub used: usize,
    pub dropped: usize,
}

fn is_missing(s: &str) -> bool {
    s.is_empty() || s.eq_ignore_ascii_case("na")
}

pub fn parse_dataset(text: &str, label: &str) -> CliResult<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CliError::Data(format!("{label}: {e}")))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| CliError::Data(format!("{label}: header lacks a `{name}` column")))
    };
    let (ti, vi) = (col("time")?, col("value")?);
    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut dropped = 0;
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Data(format!("{label}: {e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| record.get(i).unwrap_or("");
        let raw = field(vi);
        if is_missing(raw) {
            dropped += 1;
            continue;
        }
        let t: f64 = field(ti)
            .parse()
            .map_err(|_| CliError::Data(format!("{label}:{line}: bad time {:?}", field(ti))))?;
        let v: f64 = raw
            .parse()
            .map_err(|_| CliError::Data(format!("{label}:{line}: bad value {raw:?}")))?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Data(format!(
                "{label}:{line}: value {v} is not strictly positive"
            )));
        }
        times.push(t);
        values.push(v);
    }
    if values.len() < 3 {
        return Err(CliError::Data(format!(
            "{label}: {} usable rows, need at least 3",
            values.len()
        )));
    }
    let sample = Sample::new(values)
        .map_err(|e| CliError::Data(format!("{label}: {e}")))?
        .with_label(label);
    Ok(Dataset {
        times,
        sample,
        dropped,
    })
}

pub fn read_dataset(path: &Path) -> CliResult<Dataset> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    parse_dataset(&text, &path.display().to_string())
}

impl Dataset {
    pub fn summary(&self) -> DatasetSummary {
        DatasetSummary {
            path: self.sample.label().unwrap_or_default().to_string(),
            used: self.sample.len(),
            dropped: self.dropped,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_drops_missing() {
        let d = parse_dataset("time,value\n1,2.5\n2,NA\n3,\n4,1.0\n5,0.7\n", "x").unwrap();
        assert_eq!(d.sample.values(), &[2.5, 1.0, 0.7]);
        assert_eq!(d.times, vec![1.0, 4.0, 5.0]);
        assert_eq!(d.dropped, 2);
    }

    #[test]
    fn column_order_and_case() {
        let d = parse_dataset("Value,Time\n2,1\n3,2\n4,3\n", "x").unwrap();
        assert_eq!(d.times, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_dataset("time,value\n1,2\n2,abc\n3,4\n", "f.csv").unwrap_err();
        assert!(e.to_string().contains("f.csv:3"), "{e}");
        let e = parse_dataset("time,value\n1,2\n2,-1\n3,4\n", "f.csv").unwrap_err();
        assert!(e.to_string().contains("f.csv:3"), "{e}");
        assert!(parse_dataset("t,v\n1,2\n", "f").is_err());
        assert!(parse_dataset("time,value\n1,2\n2,NA\n3,1\n", "f").is_err());
    }
}
